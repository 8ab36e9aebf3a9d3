from conftest import NAMED_POSETS, named_poset, random_system
from posetsys import _linalg as la
from posetsys.corpus import load_corpus_system
from posetsys.duality import verify_duality
from posetsys.poset import build_poset
from posetsys.system import PosetCausalSystem


def test_combined_corpus_system_passes_all_identities():
    rep = verify_duality(load_corpus_system("strict-chain-combined"))
    assert rep.ok, rep.describe()
    assert rep.failures == []
    # aggregates, per node (2 each), per pair (4 spread over both ranges),
    # per-node bounds (6 each), plus flag equivalences
    assert len(rep.checks) > 40


def test_zero_system_identities():
    poset = build_poset(3, [(1, 2), (2, 3)])
    sys = PosetCausalSystem(
        poset=poset, n=(1, 1, 1), m=(1, 1, 1), r=(1, 1, 1),
        A=la.zeros(3, 3), B=la.zeros(3, 3), C=la.zeros(3, 3), D=la.zeros(3, 3),
    )
    rep = verify_duality(sys)
    assert rep.ok, rep.describe()


def test_randomized_identities_over_named_posets(rng):
    # a light version of the acceptance sweep, one system per named poset
    for name in NAMED_POSETS:
        sys = random_system(rng, named_poset(name))
        rep = verify_duality(sys)
        assert rep.ok, f"{name}:\n{rep.describe()}"


def test_report_describes_checks():
    rep = verify_duality(load_corpus_system("two-node-local-gap"))
    assert rep.ok
    assert "identities hold" in rep.describe()
