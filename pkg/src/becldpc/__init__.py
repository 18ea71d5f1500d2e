"""LDPC codes on the binary erasure channel: spectra, ML bounds, thresholds, QC codes and decoders."""

__version__ = "0.1.0"

from .bounds import BoundCurve, BoundKind, curve
from .decode import (
    DecodeResult,
    DecodeStatus,
    ErasureWord,
    SwmlConfig,
    TannerGraph,
    bp_peel,
    ml_decode,
    swml_decode,
)
from .ensembles import EnsembleSpec, sample_gallager, sample_ru
from .errors import (
    ConfigError,
    ContractViolation,
    DecodingInvariantError,
    DegreeMatrixParseError,
    EnumerationBudgetError,
)
from .gf2 import BitMatrix, SolveOutcome, SolveStatus, nullspace, rank, solve_erasures
from .qc import (
    DegreeMatrix,
    QcCode,
    assemble_irregular_base,
    expand_tailbiting,
    expand_window,
    load_fixture,
    parse_degree_matrix,
)
from .sim import ChannelConfig, SimCurve, SimPoint, erase, run_fer, trial_outcomes
from .spectrum import Spectrum, avg_spectrum_gallager, empirical_spectrum
from .thresholds import ml_threshold_lower, table2

__all__ = [
    "BitMatrix", "BoundCurve", "BoundKind", "ChannelConfig", "ConfigError", "ContractViolation",
    "DecodeResult", "DecodeStatus", "DecodingInvariantError", "DegreeMatrix", "DegreeMatrixParseError",
    "EnsembleSpec", "EnumerationBudgetError", "ErasureWord", "QcCode", "SimCurve", "SimPoint",
    "SolveOutcome", "SolveStatus", "Spectrum", "SwmlConfig", "TannerGraph",
    "assemble_irregular_base", "avg_spectrum_gallager", "bp_peel", "curve", "empirical_spectrum",
    "erase", "expand_tailbiting", "expand_window", "load_fixture", "ml_decode", "ml_threshold_lower", "nullspace",
    "parse_degree_matrix", "rank", "run_fer", "sample_gallager", "sample_ru", "solve_erasures",
    "swml_decode", "table2", "trial_outcomes",
]
