"""Wave-equation laboratory: spectral free/perturbed wave groups on periodic
grids, random initial data with mixing controls, covariance dynamics, and a
config-driven experiment runner.

The compiled core is ``_wavelab`` (inside this package when installed, on
``PYTHONPATH`` when used from a build tree); everything it exports is
re-exported here.
"""

try:
    from ._wavelab import (  # noqa: F401
        Grid,
        adjoint_evolve,
        bump,
        evolve,
        experiment_kinds,
        functional_samples,
        inner_product,
        moments,
        normality,
        quadratic_forms,
        run_experiment,
        sample_ma,
        validate_config,
    )
except ImportError:  # build-tree layout: extension module not packaged yet
    from _wavelab import (  # noqa: F401
        Grid,
        adjoint_evolve,
        bump,
        evolve,
        experiment_kinds,
        functional_samples,
        inner_product,
        moments,
        normality,
        quadratic_forms,
        run_experiment,
        sample_ma,
        validate_config,
    )

__all__ = [
    "Grid",
    "adjoint_evolve",
    "bump",
    "evolve",
    "experiment_kinds",
    "functional_samples",
    "inner_product",
    "moments",
    "normality",
    "quadratic_forms",
    "run_experiment",
    "sample_ma",
    "validate_config",
]

__version__ = "0.1.0"
