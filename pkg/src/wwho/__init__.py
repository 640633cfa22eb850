"""WWHO: schema-driven multilingual tokenization.

Three layers: a script router, a DFA syllabifier driven by external
language schemas, and a syllable-aware pair encoder unified with a
foundation byte tokenizer in one collision-free ID space.
"""

__version__ = "0.1.0"

from .schema import (
    CharClass,
    DfaTable,
    LanguageSchema,
    SchemaError,
    classify,
    default_schemas,
    load_bundled,
    load_schema,
    validate_schema,
)
from .router import OTHER, Segment, route, script_of
from .linguistrie import Syllable, syllabify, syllabify_text
from .sgpe import (
    MergeRule,
    SgpeModel,
    SgpeTrainingError,
    decode_segment,
    encode_segment,
    train,
)
from .foundation import (
    ByteFoundation,
    FoundationError,
    FoundationTokenizer,
    RankFileFoundation,
    byte_fallback,
    load_rank_file,
)
from .metatok import MetaTokenizer, MetaTokenizerError

__all__ = [
    "CharClass",
    "DfaTable",
    "LanguageSchema",
    "SchemaError",
    "classify",
    "default_schemas",
    "load_bundled",
    "load_schema",
    "validate_schema",
    "OTHER",
    "Segment",
    "route",
    "script_of",
    "Syllable",
    "syllabify",
    "syllabify_text",
    "MergeRule",
    "SgpeModel",
    "SgpeTrainingError",
    "decode_segment",
    "encode_segment",
    "train",
    "ByteFoundation",
    "FoundationError",
    "FoundationTokenizer",
    "RankFileFoundation",
    "byte_fallback",
    "load_rank_file",
    "MetaTokenizer",
    "MetaTokenizerError",
    "__version__",
]
