"""Frame tests for Gabor systems G(g, alpha, beta) with rational density alpha*beta = p/q."""

from .analysis import (DomainMode, GridSpec, ScanResult, SweepRecord, Verdict,
                       certify_three_fifths, fourier_dual_consistency, fundamental_domain,
                       odd_window_deficiency, scan, sweep)
from .errors import (ConvergenceFailure, DomainError, NotHermitian, ParityError,
                     TailNotSummable)
from .gramian import (Certificate, IndexMaps, LatticeParams, ReducedFraction, build_A,
                      build_P, build_Q, index_maps, symmetry_check)
from .numerics import (RankReport, TausskyMode, TausskyReport, determinant,
                       min_eig_hermitian, rank_with_tol, singular_values, taussky_check)
from .windows import (Envelope, Parity, WindowKind, WindowSpec, envelope_bound,
                      eval_window, gaussian, hermite1, hyperbolic_secant,
                      two_sided_exponential, window_from_string)
from .zak import (TruncationPlan, ZakPoint, truncation_bound, vector_zak,
                  vector_zak_normalization)

__version__ = "0.1.0"
