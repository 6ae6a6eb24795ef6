"""Focus measurement and synthetic focus sweeps for thermal infrared imagery."""

from .errors import (
    BoundsError,
    DomainError,
    EmptyCurveError,
    FormatError,
    FrameSizeError,
    NoRealImageError,
    PixelRangeError,
    StackError,
    ThermofocusError,
)
from .estimators import BestFocusSelector, SMLMap, SumModifiedLaplacian
from .frames import FocusStack, ThermalFrame, frame_from_values, normalize_frame
from .measures import (
    WHOLE_FRAME,
    CurveStats,
    FocusCurve,
    SmlParams,
    best_focus,
    curve_stats,
    focus_curve,
    modified_laplacian,
    sml_global,
    sml_map,
)
from .optics import (
    CameraSpec,
    DispersionModel,
    airy_diameter,
    chromatic_focal_shift,
    defocus_blur_diameter,
    depth_of_field,
    pixel_pitch,
    thin_lens_image_distance,
    wien_peak_wavelength,
    wien_span,
)
from .simulate import (
    ExperimentSpec,
    SceneObject,
    SceneSpec,
    SweepSpec,
    generate_experiment,
    generate_stack,
    ground_truth_focus,
    radiance_value,
    render_frame,
)

__version__ = "0.1.0"
