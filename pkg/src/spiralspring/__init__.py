"""Large-deflection model and thickness optimisation of spiral torsion springs."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    ONYX,
    SOLID,
    DEFAULT_SPIRAL,
    DEFAULT_THICKNESS,
    ArcGrid,
    HollowBox,
    Infill,
    LoadCase,
    Material,
    SolidRect,
    SpiralParams,
    ThicknessProfile,
    homogeneous_yield_limit,
    max_bending_energy_density,
    section_energy_density_at_yield,
    section_properties,
)
from .geometry import SpiralKinematics, outline  # noqa: E402
from .elastica import SolverConfig, solve_bvp  # noqa: E402
from .analysis import evaluate, sweep  # noqa: E402
from .optimizer import OptimizerConfig, optimize  # noqa: E402
