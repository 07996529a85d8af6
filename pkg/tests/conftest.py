import numpy as np
import pytest

from vforge.corpus import (ROOT_HEAD, AnnotatedExample, EntitySpan, LabelSet,
                           Token, default_chemprot_labelset)

# populated by the acceptance tests; echoed after the run so the pass lines
# survive pytest's output capture
ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    for name in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"ACCEPTANCE {name}: PASS")


def make_example(ex_id, texts, heads, e1, e2, label, punct=None, deprels=None):
    punct = punct or [False] * len(texts)
    deprels = deprels or ["dep"] * len(texts)
    tokens = tuple(
        Token(index=i, text=t, head=h, deprel=d, is_punct=p)
        for i, (t, h, d, p) in enumerate(zip(texts, heads, deprels, punct))
    )
    def span(pair, role):
        s, e = pair
        return EntitySpan(start=s, end=e, text=" ".join(texts[s:e]), role=role)
    return AnnotatedExample(id=ex_id, tokens=tokens, e1=span(e1, "E1"),
                            e2=span(e2, "E2"), label=label)


def random_tree_heads(n, rng):
    """Random labeled tree as head links: attach each node to an earlier one,
    then relabel with a random permutation."""
    perm = rng.permutation(n)
    heads = [0] * n
    for pos in range(n):
        node = int(perm[pos])
        if pos == 0:
            heads[node] = ROOT_HEAD
        else:
            heads[node] = int(perm[int(rng.integers(pos))])
    return heads


@pytest.fixture(scope="session")
def chemprot():
    return default_chemprot_labelset()


@pytest.fixture(scope="session")
def tiny_labelset():
    return LabelSet(
        labels=("A", "B", "none"),
        descriptions={"A": "relation a", "B": "relation b", "none": "no relation"},
        negative_label="none",
    )


@pytest.fixture(scope="session")
def paper_example():
    """Hand-parsed version of the running tracer-uptake example."""
    texts = ["The", "specificity", "of", "tracer", "uptake", "was", "determined",
             "by", "adding", "the", "imipramine", "inhibitor", "NET", "."]
    heads = [1, 6, 4, 4, 1, 6, ROOT_HEAD, 8, 6, 11, 11, 8, 11, 6]
    deprels = ["det", "nsubj:pass", "case", "compound", "nmod", "aux:pass",
               "root", "mark", "advcl", "det", "compound", "obj", "appos", "punct"]
    punct = [False] * 13 + [True]
    return make_example("paper-1", texts, heads, (10, 11), (12, 13), "CPR:4",
                        punct=punct, deprels=deprels)
