"""dativekit: corpus surgery and evaluation for the English dative alternation.

The toolkit detects datives in dependency-parsed corpora, synthesizes
counterfactual alternants, builds manipulated training corpora (balanced,
swapped, ablated, polluted, globally re-linearized by constituent length),
and computes preference scores and statistics from externally supplied
log-probabilities.
"""

__version__ = "0.1.0"

from .alternate import (
    AlternationError,
    AlternationPair,
    Alternator,
    PrepChoice,
    build_pair,
    choose_preposition,
    do_to_po,
    merge_annotations,
    po_to_do,
    read_pairs_jsonl,
    write_pairs_jsonl,
)
from .detect import (
    DO,
    PO,
    DativeInstance,
    DetectionConfig,
    DEFAULT_CONFIG,
    Partition,
    VerbLexicon,
    apply_strict,
    detect_2postverbal,
    detect_loose,
    partition_corpus,
    read_instances_jsonl,
    refine_strict,
    write_instances_jsonl,
)
from .linearize import (
    LONG_FIRST,
    LONG_FIRST_HEADFINAL,
    RANDOM_FIRST,
    SHORT_FIRST,
    InversionReport,
    LinearizationMode,
    OrderReport,
    corpus_order_report,
    inversion_score,
    relinearize,
    relinearize_bracketed,
    relinearize_permutation,
    relinearize_tree,
)
from .scoring import (
    BackendError,
    EvalResult,
    FileBackend,
    HTTPBackend,
    LogProbBackend,
    PreferenceRecord,
    ScoredSentence,
    TableBackend,
    UniformBackend,
    do_preference,
    encode_features,
    evaluate_pairs,
    geo_mean_perplexity,
)
from .stats import (
    RegressionResult,
    VerbComparison,
    emit_report,
    ols,
    pearson,
    read_judgments_csv,
    read_records_csv,
    verb_level_compare,
    write_records_csv,
    zscore,
)
from .surgery import (
    CONDITIONS,
    OutputSentence,
    PollutionPlan,
    SurgeryConfig,
    SurgeryError,
    SurgeryReport,
    SurgeryResult,
    build_condition,
    inject_pollution,
    plan_pollution,
    write_corpus,
    write_report,
)
from .treebank import (
    DepTree,
    ParseError,
    Span,
    Token,
    emit_treebank,
    load_treebank,
    parse_treebank,
    subtree_span,
    validate_tree,
    write_treebank,
)
