"""Word-wise intonation model: spline stylization of pitch, per-word
pattern/state quantization, symbolic-tone synthesis, and corpus tooling."""

from .alignment import (
    AlignmentFormat,
    UtteranceAlignment,
    WordInterval,
    load_alignment,
)
from .clustering import ClusterModel, Metric, PastaLabel, assign, train
from .dtw import dtw_barycenter, dtw_distance, dtw_distances_many_to_one, dtw_path
from .errors import PastaError
from .intsint import (
    CommunicativeType,
    IntsintMark,
    IntsintParams,
    PitchAccent,
    PseudoTimeline,
    Tone,
    ToRIAccent,
    build_pseudo_timeline,
    decode_intsint,
    encode_intsint,
    load_marks,
    save_marks,
    synthesize_markup,
    tori_to_intsint,
)
from .momel import (
    MomelAnchor,
    MomelFitParams,
    MomelSpline,
    SplineSlice,
    eval_spline,
    fit_momel,
    slice_spline,
)
from .patterns import PatternMatrix, WordPattern, extract_patterns
from .pipeline import (
    MarkupRecord,
    TrainConfig,
    UtteranceRecord,
    export_dataset,
    read_manifest,
    run_markup,
    run_train,
)
from .pitch import (
    F0Contour,
    F0Format,
    F0Frame,
    NormalizationMode,
    NormalizationScope,
    compute_mean_f0,
    load_f0,
    normalize_f0,
    resample_with_lowpass,
    save_f0,
)

__version__ = "0.1.0"
