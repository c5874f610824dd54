"""Johnson-Segalman falling-sphere toolkit."""

from jsflow._core import (
    Error,
    InvalidParameter,
    JsParams,
    RunConfig,
    analyze_oscillations,
    build_mesh,
    channel_to_steady,
    classify_curve,
    derive_dimensionless,
    lyapunov_step,
    read_mesh,
    run_falling_sphere,
    shear_stress,
    stress_to_shear_rates,
    wall_correction,
    write_mesh,
)

__all__ = [
    "Error",
    "InvalidParameter",
    "JsParams",
    "RunConfig",
    "analyze_oscillations",
    "build_mesh",
    "channel_to_steady",
    "classify_curve",
    "derive_dimensionless",
    "lyapunov_step",
    "read_mesh",
    "run_falling_sphere",
    "shear_stress",
    "stress_to_shear_rates",
    "wall_correction",
    "write_mesh",
]
