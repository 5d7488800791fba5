"""Proof serialization, digests, and the independent replay checker."""

import pytest

from contab.clausify import problem_to_matrix
from contab.errors import InputError
from contab.proof import (CheckResult, ExtensionStep, LemmaStep, Proof,
                          ReductionStep, StartStep, check, parse_machine,
                          proof_digest, render_machine, render_text,
                          MACHINE_FORMAT_HEADER)
from contab.search import STRATEGIES, prove
from contab.tptp import parse_problem

from oracles import named_ground_matrix

DIVERGENCE_TEXT = """
    fof(c1, axiom, ![X]: (p(X) | q(X))).
    fof(c2, axiom, ![Y]: (~p(Y) | r(Y))).
    fof(c3, axiom, ![Z]: ~p(Z)).
    fof(c4, axiom, ~r(a)).
    fof(c5, axiom, ~r(b)).
    fof(c6, axiom, ~q(c)).
"""

LEMMA_TEXT = """
    fof(fact, axiom, c).
    fof(imp, axiom, c => d).
    fof(goal, conjecture, c & d).
"""


def matrix_of(text):
    return problem_to_matrix(parse_problem(text))


def proved(text, strategy="rex"):
    m = matrix_of(text)
    out = prove(m, STRATEGIES[strategy])
    assert out.status == "proved"
    return m, out.proof


# -- serialization ----------------------------------------------------------

def test_machine_round_trip_is_identity():
    for text in (DIVERGENCE_TEXT, LEMMA_TEXT):
        _, proof = proved(text)
        rendered = render_machine(proof)
        assert rendered.startswith(MACHINE_FORMAT_HEADER + "\n")
        again = parse_machine(rendered)
        assert again == proof
        assert render_machine(again) == rendered


def test_machine_format_shape():
    m, proof = proved(DIVERGENCE_TEXT)
    lines = render_machine(proof).splitlines()
    assert lines[0] == "cproof v1"
    assert lines[1] == "s 0"
    kinds = {ln.split()[0] for ln in lines[1:]}
    assert kinds <= {"s", "e", "r", "l"}


def test_parse_skips_comment_lines_and_blanks():
    _, proof = proved(LEMMA_TEXT)
    noisy = ("% SZS status Theorem for x.p\n\n" + render_machine(proof)
             + "% trailing remark\n")
    assert parse_machine(noisy) == proof


def test_parse_rejects_missing_header():
    with pytest.raises(InputError, match="header"):
        parse_machine("s 0\n")


def test_parse_rejects_malformed_lines():
    for bad in ("s\n", "s 0 extra\n", "e 1\n", "e 1 0\n", "r 0\n", "l 1\n",
                "q 1 2 p\n", "e one 0 p\n"):
        with pytest.raises(InputError, match="malformed"):
            parse_machine(MACHINE_FORMAT_HEADER + "\n" + bad)


def test_goal_text_may_contain_spaces():
    text = """
        fof(a, axiom, 'strange pred'(u)).
        fof(g, conjecture, 'strange pred'(u)).
    """
    m, proof = proved(text)
    rendered = render_machine(proof)
    assert "strange pred(u)" in rendered
    again = parse_machine(rendered)
    assert again == proof
    assert check(m, again).ok


def test_digest_is_stable_and_discriminating():
    _, p1 = proved(DIVERGENCE_TEXT)
    _, p2 = proved(LEMMA_TEXT)
    assert proof_digest(p1) == proof_digest(p1)
    assert proof_digest(p1) != proof_digest(p2)
    assert len(proof_digest(p1)) == 64


def test_strategies_finding_the_same_derivation_share_a_digest():
    m = matrix_of(DIVERGENCE_TEXT)
    digests = set()
    for s in ("none", "r", "ex", "rex"):
        out = prove(m, STRATEGIES[s])
        assert out.status == "proved"
        digests.add(proof_digest(out.proof))
    assert len(digests) == 1


def test_canonical_variable_names_survive_round_trip():
    text = """
        fof(a, axiom, ![X]: p(X, X)).
        fof(g, conjecture, ?[Y]: p(Y, Y)).
    """
    m, proof = proved(text)
    rendered = render_machine(proof)
    assert "_0" in rendered
    assert check(m, parse_machine(rendered)).ok


def test_render_text_with_and_without_matrix():
    m, proof = proved(LEMMA_TEXT)
    with_m = render_text(proof, m)
    without = render_text(proof)
    assert "Proof with %d step(s)" % len(proof) in with_m
    assert "start with clause" in with_m
    assert "lemma" in with_m
    assert "clause 0:" in with_m
    assert "clause 0:" not in without


# -- checker: acceptance ----------------------------------------------------

def test_checker_accepts_engine_proofs():
    for text in (DIVERGENCE_TEXT, LEMMA_TEXT):
        m, proof = proved(text)
        res = check(m, proof)
        assert res.ok
        assert bool(res) is True


def test_checker_ignores_start_flags():
    # soundness does not depend on which clause the search policy starts at
    m = named_ground_matrix([["~p"], ["p", "q"], ["~q"]])
    proof = Proof((StartStep(0), ExtensionStep("~p", 1, 0),
                   ExtensionStep("q", 2, 0)))
    assert check(m, proof).ok


def test_checker_replays_lemma_sharing():
    m, proof = proved(LEMMA_TEXT)
    assert any(isinstance(s, LemmaStep) for s in proof.steps)
    assert check(m, proof).ok


def test_checker_accepts_reductions_at_depth():
    m = named_ground_matrix([["p", "q"], ["~p", "~q"], ["p", "~q"],
                             ["~p", "q"]])
    out = prove(m, STRATEGIES["none"])
    assert any(isinstance(s, ReductionStep) for s in out.proof.steps)
    assert check(m, out.proof).ok


# -- checker: rejection -----------------------------------------------------

def test_checker_rejects_empty_proof():
    m = named_ground_matrix([["p"], ["~p"]])
    res = check(m, Proof(()))
    assert not res and res.kind == "structural"


def test_checker_rejects_non_start_head():
    m = named_ground_matrix([["p"], ["~p"]])
    res = check(m, Proof((ExtensionStep("p", 1, 0),)))
    assert not res
    assert res.step_index == 0 and res.kind == "structural"


def test_checker_rejects_truncated_proof():
    m, proof = proved(DIVERGENCE_TEXT)
    cut = Proof(proof.steps[:-1])
    res = check(m, cut)
    assert not res
    assert res.kind == "structural"
    assert res.step_index == len(cut.steps)
    assert "open goal" in res.message


def test_checker_rejects_trailing_step():
    m, proof = proved(LEMMA_TEXT)
    padded = Proof(proof.steps + (ReductionStep("d", 0),))
    res = check(m, padded)
    assert not res
    assert res.kind == "structural"
    assert "closed" in res.message


def test_checker_rejects_out_of_range_indices():
    m, proof = proved(DIVERGENCE_TEXT)
    # start clause
    res = check(m, Proof((StartStep(99),) + proof.steps[1:]))
    assert not res and res.step_index == 0
    # extension clause and literal
    steps = list(proof.steps)
    for j, st in enumerate(steps):
        if isinstance(st, ExtensionStep):
            bad = steps[:j] + [ExtensionStep(st.goal, 99, st.lit)] \
                + steps[j + 1:]
            res = check(m, Proof(tuple(bad)))
            assert not res and res.kind == "structural"
            assert res.step_index == j
            bad = steps[:j] + [ExtensionStep(st.goal, st.clause, 99)] \
                + steps[j + 1:]
            res = check(m, Proof(tuple(bad)))
            assert not res and res.kind == "structural"
            break


def test_checker_rejects_bad_path_index():
    m = named_ground_matrix([["p", "q"], ["~p", "~q"], ["p", "~q"],
                             ["~p", "q"]])
    out = prove(m, STRATEGIES["none"])
    steps = list(out.proof.steps)
    for j, st in enumerate(steps):
        if isinstance(st, ReductionStep):
            bad = steps[:j] + [ReductionStep(st.goal, 50)] + steps[j + 1:]
            res = check(m, Proof(tuple(bad)))
            assert not res and res.kind == "structural"
            assert res.step_index == j
            return
    pytest.fail("expected a reduction step")


def test_checker_rejects_non_complementary_extension():
    # retarget an extension at a clause whose literal cannot unify
    m, proof = proved(DIVERGENCE_TEXT)
    steps = list(proof.steps)
    for j, st in enumerate(steps):
        if isinstance(st, ExtensionStep) and st.clause != 0:
            bad = steps[:j] + [ExtensionStep(st.goal, 0, 0)] + steps[j + 1:]
            res = check(m, Proof(tuple(bad)))
            assert not res
            assert res.kind == "logical"
            assert res.step_index == j
            return
    pytest.fail("expected an extension step")


def test_checker_rejects_wrong_lemma():
    m, proof = proved(LEMMA_TEXT)
    steps = list(proof.steps)
    for j, st in enumerate(steps):
        if isinstance(st, LemmaStep):
            res = check(m, Proof(tuple(
                steps[:j] + [LemmaStep(st.goal, 9)] + steps[j + 1:])))
            assert not res and res.kind == "structural"
            return
    pytest.fail("expected a lemma step")


def test_checker_rejects_lemma_borrowed_from_a_sibling_branch():
    # q holds only inside the subtree that proved it; a flat-lemma replay
    # would accept this proof of a satisfiable matrix
    m = named_ground_matrix([["q", "v"], ["~q", "b"], ["~b", "~q"],
                             ["~v", "b"]])
    bogus = Proof((
        StartStep(0),
        ExtensionStep("q", 1, 0),      # path [q], prove b
        ExtensionStep("b", 2, 0),      # path [q, b], prove ~q
        ReductionStep("~q", 1),        # closes: ~q against path q
        ExtensionStep("v", 3, 0),      # second branch: prove b again
        LemmaStep("b", 0),             # b was proven under path [q] only
    ))
    res = check(m, bogus)
    assert not res
    assert res.step_index == 5


def test_check_result_defaults():
    ok = CheckResult(True)
    assert ok.step_index == -1 and ok.kind == "" and ok.message == ""
