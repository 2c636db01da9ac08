"""Wavelet-kernel extreme learning machines.

Kernel ELM classifiers (Mexican Hat wavelet, Gauss, polynomial), the
original random-hidden-layer ELM baseline, a Fourier-based admissibility
verifier for translation-invariant kernels, and a statistics-backed
benchmark harness with paired t-tests, grid search, and report/figure
output.
"""

from .admissibility import (
    FourierCheckReport,
    PsdAuditResult,
    Verdict,
    closed_form_ft,
    numeric_fourier_1d,
    psd_audit,
    verify_admissibility,
)
from .data import (
    Dataset,
    NormStats,
    SplitPlan,
    apply_normalizer,
    fit_normalizer,
    load_csv,
    load_registry,
    random_split,
    resolve_dataset,
    save_csv,
)
from .elm import (
    ElmModel,
    HiddenLayer,
    hidden_output_matrix,
    init_hidden_layer,
    predict_elm,
    train_elm,
)
from .errors import ConfigError, NumericError, ParseError, ShapeError, WavekelmError
from .evaluation import (
    Algo,
    AlgoConfig,
    BenchmarkReport,
    GridSearchResult,
    TrialResult,
    grid_search,
    paired_t_test,
    run_trials,
    summarize,
)
from .kelm import (
    KelmModel,
    classify_binary,
    classify_multiclass,
    predict_raw,
    solve_regularized,
    train_kelm,
)
from .kernels import (
    GramMatrix,
    KernelFamily,
    KernelSpec,
    cross_kernel_vector,
    eval_kernel,
    gram_matrix,
    mexican_hat_mother,
)
from .model_io import load_model, save_model
from .reporting import emit_report, format_p_value, render_timing_figure, write_timing_csv

__version__ = "0.1.0"
