"""chaoscope: determinism and butterfly-effect diagnostics for scalar
time series.

Pipeline: load a series, min-max normalize it, delay-embed, then apply any
of the estimators - Kaplan-Glass determinism coefficient, Wolf maximal
Lyapunov exponent, Grassberger-Procaccia correlation integral / dimension /
K2 entropy - or run the full sweep via the report layer or the CLI.
"""

__version__ = "0.1.0"

from .series import TimeSeries, SeriesError, load_csv, to_log_returns, min_max_normalize
from .embedding import EmbeddingParams, Embedding, EmbeddingError, delay_embed
from .determinism import (
    DeterminismParams,
    DeterminismResult,
    DeterminismError,
    determinism_coefficient,
)
from .lyapunov import WolfParams, LyapunovResult, LyapunovError, max_lyapunov
from .corrdim import (
    Saturation,
    D2Fit,
    K2Record,
    CorrelationProfile,
    CorrdimError,
    default_eps_grid,
    correlation_integral,
    correlation_counts,
    estimate_d2,
    saturation_verdict,
    saturation_from_c_matrix,
    k2_entropy,
    correlation_profile,
)
from .synth import (
    gen_logistic,
    gen_lorenz,
    gen_gaussian_noise,
    gen_random_walk,
    gen_ar1,
    shuffle_surrogate,
    GeneratorError,
)
from .report import (
    SweepCell,
    Verdict,
    MleSign,
    Classification,
    ReportError,
    run_sweep,
    top_k_by_kappa,
    make_verdict,
    render_table,
    parse_json_cells,
)
