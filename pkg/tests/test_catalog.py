import pytest

from gencok.catalog import UnknownEntryError, catalog_get, catalog_list
from gencok.cli.report import analyze

IDS = [i for i, _ in catalog_list()]

REQUIRED = [
    "s1_trivial",
    "t2_kahler",
    "t3_cokahler_classical",
    "su2_normal_contact_metric",
    "su2_twisted",
    "su2_contact_nonstrong",
    "heisenberg_nonnormal",
    "product_t1xt1",
    "product_su2xs1",
    "product_gk_gcok_t2xs1",
]


def test_listing_is_stable_and_complete():
    assert IDS[: len(REQUIRED)] == REQUIRED
    assert catalog_list() == catalog_list()
    assert len(set(IDS)) == len(IDS)


def test_unknown_entry():
    with pytest.raises(UnknownEntryError):
        catalog_get("nope")


@pytest.mark.parametrize("entry_id", IDS)
def test_entry_reproduces_expected(entry_id):
    e = catalog_get(entry_id)
    report = analyze(e.kind, e.payload, None, e.id)
    assert report["valid"]
    assert report["flags"] == e.expected
    if e.witness:
        assert e.witness in [w["text"] for w in report["witnesses"]]


def test_headline_records():
    assert catalog_get("su2_normal_contact_metric").expected == dict(
        gac=True,
        contact_plus=True,
        contact_minus=True,
        strong=True,
        normal=True,
        metric_ok=True,
        compatible=True,
        gphi_strong=False,
        cokahler=False,
    )
    assert catalog_get("t3_cokahler_classical").expected["cokahler"]
    tw = catalog_get("su2_twisted")
    assert tw.frame.H == tw.frame.form(1, 2, 3)
    assert tw.expected["strong"] and not tw.expected["gphi_strong"]


def test_twist_can_be_switched_off():
    e = catalog_get("su2_twisted")
    report = analyze(e.kind, e.payload, False, e.id)
    assert "[[X1 - i s2, X2 + i s1]] = -X3" in [w["text"] for w in report["witnesses"]]
