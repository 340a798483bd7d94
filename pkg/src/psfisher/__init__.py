"""Fisher-information toolkit for parameter estimation with postselection.

Computes quantum and classical Fisher information for weak-value
amplification schemes, evaluates the closed forms of the qubit/Gaussian
benchmark, audits the no-go bound Pr(f) * I_ps <= I_int on randomized
instances, and runs finite-sample Monte Carlo strategy comparisons.
"""

from .analytic import (AnalyticParams, fps_density, ic_closed, pr_f_closed,
                       qfi_int_closed, qfi_ps_closed, w_pm)
from .errors import (ConfigError, DegenerateModelError, HermiticityError,
                     InputError, OrthogonalSelectionError,
                     PostselectionImpossibleError, ResolutionError, ShapeError)
from .fisher import (ParamStateFamily, SldOperator, bures_metric_check,
                     classical_fisher, qfi_mixed, qfi_pure, sld_solve,
                     weak_value)
from .linalg import (eig_hermitian, kron, partial_inner, partial_trace_system,
                     unitary_of, validate_density)
from .mc import (ComparisonConfig, EstimationRun, TrialBudget, format_summary,
                 mle_fit, run_comparison, sample_outcomes)
from .postselect import (InequalityResult, InstanceSpec, PostselectionMap,
                         check_inequality, evolve_joint, interaction_qfi,
                         mean_shift, postselect, postselection_map,
                         qfi_postselected, random_instance, weak_limit_value)
from .qubit_gaussian import QubitGaussianModel
from .states import (GaussianProbe, ProbeGrid, Selection, discretize_probe,
                     joint_initial, make_selection_states, position_operator)
from .sweep import SweepConfig, SweepResult, run_sweep, selection_grid, write_csv

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
