from hypothesis import given, settings, strategies as st

from wae.corpus import DEFAULT_EXTENT, TemplateKind, generate_corpus, generate_screen
from wae.ingest import filter_screen
from wae.model import ComponentType, sequence_hash, validate_screen


def test_generate_screen_deterministic():
    a = generate_screen(42, TemplateKind.Form)
    b = generate_screen(42, TemplateKind.Form)
    assert a == b


def test_generate_screen_component_count_range():
    for seed in range(50):
        for kind in TemplateKind:
            s = generate_screen(seed, kind)
            assert 3 <= len(s.components) <= 30, (kind, len(s.components))


def test_generate_screen_valid_and_filterable():
    for seed in range(40):
        for kind in TemplateKind:
            s = generate_screen(seed, kind)
            assert validate_screen(s) == []
            assert filter_screen(s).keep, (seed, kind)


def test_settings_switches_right_aligned():
    for seed in range(1000):
        s = generate_screen(seed, TemplateKind.Settings)
        for c in s.components:
            if c.ctype is ComponentType.Switch:
                assert c.bounds.right >= 0.7 * s.width


def test_form_has_edittext_and_button():
    for seed in range(1000):
        s = generate_screen(seed, TemplateKind.Form)
        types = {c.ctype for c in s.components}
        assert ComponentType.EditText in types
        assert ComponentType.Button in types


def test_no_duplicate_bounds_within_screen():
    for seed in range(200):
        for kind in TemplateKind:
            s = generate_screen(seed, kind)
            raw = [(c.bounds.left, c.bounds.top, c.bounds.right, c.bounds.bottom) for c in s.components]
            assert len(raw) == len(set(raw)), (seed, kind)


def test_generate_corpus_empty():
    assert generate_corpus(1, 0) == []


def test_generate_corpus_unique_and_named():
    screens = generate_corpus(5, 60)
    assert len(screens) == 60
    assert [s.id for s in screens] == [f"syn-5-{i}" for i in range(60)]
    hashes = {sequence_hash(s) for s in screens}
    assert len(hashes) == 60


def test_generate_corpus_deterministic():
    a = generate_corpus(123, 40)
    b = generate_corpus(123, 40)
    assert a == b


def test_generate_corpus_respects_mix():
    screens = generate_corpus(9, 40, mix={TemplateKind.Settings: 1.0})
    assert all(s.category == "settings" for s in screens)


@settings(max_examples=25, deadline=None)
@given(
    seed=st.integers(0, 2**32),
    kind=st.sampled_from(list(TemplateKind)),
    extent=st.sampled_from([(1080, 1920), (720, 1280), (1440, 2560)]),
)
def test_generate_screen_any_extent_valid(seed, kind, extent):
    s = generate_screen(seed, kind, extent)
    assert s.width, s.height == extent
    assert validate_screen(s) == []
    assert filter_screen(s).keep
