"""Seeded pseudo-random instances and boolean queries, shared by the
oracle-agreement and invariant suites. Shapes: at most 10 endogenous tuples,
at most 3 predicates of arity at most 3, queries of 1-3 atoms with an
optional inequality and an optional second disjunct."""

import random

from whydb import Fact, Instance
from whydb.query import CQ, UCQ, Atom, Var

PRED_SPACE = [("P", 1), ("Q", 2), ("R", 3)]
CONSTS = ["a", "b", "c", "d"]
VARS = ["x", "y", "z", "w"]

DEFAULT_SEED = 20260808


def random_instance(rng, with_exogenous=True):
    preds = rng.sample(PRED_SPACE, rng.randint(1, 3))
    n_endo = rng.randint(1, 10)
    n_exo = rng.randint(1, 2) if with_exogenous and rng.random() < 0.25 else 0
    # a small constant pool keeps joins dense enough to be interesting
    pool = CONSTS[: rng.randint(2, 4)]
    keys = set()
    for _ in range(200):
        if len(keys) >= n_endo + n_exo:
            break
        pred, arity = rng.choice(preds)
        keys.add((pred, tuple(rng.choice(pool) for _ in range(arity))))
    keys = sorted(keys)
    rng.shuffle(keys)
    n_exo = min(n_exo, len(keys))
    facts = [
        Fact(pred, args, i + 1, exogenous=i < n_exo)
        for i, (pred, args) in enumerate(keys)
    ]
    return Instance(facts)


def random_query(rng, inst=None):
    arity_by_pred = dict(PRED_SPACE)
    local = sorted(inst.arities) if inst is not None and len(inst) else []

    def one_pred():
        if local and rng.random() < 0.8:
            name = rng.choice(local)
        else:
            name = rng.choice(sorted(arity_by_pred))
        return name, arity_by_pred[name]

    def one_cq():
        n_atoms = rng.choice([1, 1, 2, 2, 3])
        atoms = []
        used = []
        for _ in range(n_atoms):
            pred, arity = one_pred()
            terms = []
            for _ in range(arity):
                if rng.random() < 0.75:
                    name = rng.choice(VARS)
                    used.append(name)
                    terms.append(Var(name))
                else:
                    terms.append(rng.choice(CONSTS))
            atoms.append(Atom(pred, tuple(terms)))
        inequalities = []
        if used and rng.random() < 0.35:
            left = Var(rng.choice(used))
            if rng.random() < 0.7:
                right = Var(rng.choice(used))
            else:
                right = rng.choice(CONSTS)
            inequalities.append((left, right))
        return CQ(tuple(atoms), tuple(inequalities))

    disjuncts = [one_cq()]
    if rng.random() < 0.3:
        disjuncts.append(one_cq())
    return UCQ(tuple(disjuncts))


def corpus(count=200, seed=DEFAULT_SEED, with_exogenous=True):
    rng = random.Random(seed)
    for _ in range(count):
        inst = random_instance(rng, with_exogenous)
        yield inst, random_query(rng, inst)
