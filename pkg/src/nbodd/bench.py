"""Random-classifier size benchmark.

For each attribute count ``n`` the harness draws ``trials`` random binary
models at threshold 0 and compiles each under a random order and under the
impact-sorted orders. Trial ``t`` of size ``n`` always uses the same seed,
derived from the master seed by ``SeedSequence([seed, n]).spawn``, so runs
are reproducible however trials are scheduled.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .compiler import compile_classifier, size_bound
from .model import generate_random_model
from .odd import evaluate
from .oracle import oracle_classify_all
from .ordering import OrderingHeuristic, make_order

HEURISTICS = ("random", "desc", "asc")
#: exhaustive soundness checks are skipped above this size unless forced
CHECK_LIMIT = 20


class BoundViolation(AssertionError):
    pass


@dataclass
class BenchRecord:
    n: int
    instances: int
    bound: int
    trials: int
    seed: int
    mean_nodes: dict[str, float] = field(default_factory=dict)
    max_nodes: dict[str, int] = field(default_factory=dict)
    seconds: dict[str, float] = field(default_factory=dict)
    nodes: dict[str, list[int]] = field(default_factory=dict, repr=False)

    def row(self, heuristics=HEURISTICS) -> dict:
        out = {"n": self.n, "instances": self.instances, "bound": self.bound}
        for h in heuristics:
            out[h] = self.mean_nodes[h]
        for h in heuristics:
            out[f"{h}_seconds"] = self.seconds[h]
        out["trials"] = self.trials
        out["seed"] = self.seed
        return out


def trial_seeds(seed: int, n: int, trials: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence([seed, n]).spawn(trials)


def _check(model, result) -> None:
    labels = oracle_classify_all(model, result.rho)
    # oracle enumerates in model order; the diagram tests attributes in result.order
    shape = model.cardinalities
    for flat, want in enumerate(labels):
        idx = np.unravel_index(flat, shape)
        inst = [int(idx[i]) for i in result.order]
        if evaluate(result.odd, inst) != int(want):
            raise AssertionError(f"compiled diagram disagrees with oracle on {idx}")


def run_trial(n: int, seq: np.random.SeedSequence, heuristics=HEURISTICS, check=False) -> dict:
    model_seq, order_seq = seq.spawn(2)
    model = generate_random_model(n, 2, model_seq)
    out = {}
    for h in heuristics:
        if h == "random":
            heuristic = OrderingHeuristic("random", seed=int(order_seq.generate_state(1)[0]))
        else:
            heuristic = OrderingHeuristic(h)
        result = compile_classifier(model, 0.0, make_order(model, heuristic))
        if result.node_count > result.bound:
            raise BoundViolation(
                f"n={n}: {result.node_count} nodes exceeds bound {result.bound} ({h})"
            )
        if check:
            _check(model, result)
        out[h] = (result.node_count, result.seconds)
    return out


def _run_trial_args(args):
    return run_trial(*args)


def bench(
    ns,
    trials: int = 100,
    seed: int = 0,
    heuristics=HEURISTICS,
    check: bool = False,
    force_check: bool = False,
    jobs: int = 1,
) -> list[BenchRecord]:
    records = []
    for n in ns:
        do_check = check and (n <= CHECK_LIMIT or force_check)
        tasks = [(n, s, tuple(heuristics), do_check) for s in trial_seeds(seed, n, trials)]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                results = list(ex.map(_run_trial_args, tasks))
        else:
            results = [_run_trial_args(t) for t in tasks]
        rec = BenchRecord(n=n, instances=2**n, bound=size_bound([2] * n), trials=trials, seed=seed)
        for h in heuristics:
            counts = [r[h][0] for r in results]
            rec.nodes[h] = counts
            rec.mean_nodes[h] = float(np.mean(counts)) if counts else float("nan")
            rec.max_nodes[h] = max(counts, default=0)
            rec.seconds[h] = float(sum(r[h][1] for r in results))
        records.append(rec)
    return records
