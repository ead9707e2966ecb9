"""Streaming one-class recognition from a single labeled example."""

from ._omt import (
    CoverState,
    DataError,
    NnRecognizer,
    NumericalError,
    OmtConfig,
    OmtRecognizer,
    Prediction,
    Representative,
    RocCurve,
    RocPoint,
    Stream,
    StreamRecord,
    SynthSpec,
    UsageError,
    __version__,
    confusion,
    cover_error,
    distance,
    emit_file,
    ingest_file,
    normalize_dataset,
    roc_sweep_nn,
    roc_sweep_omt,
    similarity,
    synth_stream,
    tpr_at_fpr,
)

__all__ = [
    "CoverState",
    "DataError",
    "NnRecognizer",
    "NumericalError",
    "OmtConfig",
    "OmtRecognizer",
    "Prediction",
    "Representative",
    "RocCurve",
    "RocPoint",
    "Stream",
    "StreamRecord",
    "SynthSpec",
    "UsageError",
    "__version__",
    "confusion",
    "cover_error",
    "distance",
    "emit_file",
    "ingest_file",
    "normalize_dataset",
    "roc_sweep_nn",
    "roc_sweep_omt",
    "similarity",
    "synth_stream",
    "tpr_at_fpr",
]
