import pytest

from wwho import MetaTokenizer, byte_fallback, default_schemas, train


@pytest.fixture(scope="session")
def schemas():
    return default_schemas()


@pytest.fixture(scope="session")
def sinhala(schemas):
    return schemas[0]


@pytest.fixture(scope="session")
def devanagari(schemas):
    return schemas[1]


TRACE_LINE = "ඔයා 1 special अद्भुत"


@pytest.fixture(scope="session")
def trace_tokenizer(schemas):
    """Byte-foundation tokenizer whose toy corpus teaches the merges the
    code-switching trace needs."""
    model = train([TRACE_LINE] * 200, schemas, vocab_size=10, prune_threshold=100)
    return MetaTokenizer(foundation=byte_fallback(), sgpe=model, schemas=schemas)
