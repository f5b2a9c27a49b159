"""Naive Bayes models in log-odds form.

A model is the prior log-odds of the positive class plus one weight of
evidence per attribute value. Classification thresholds the posterior
log-odds, which is the prior plus the weights of the observed values.
"""

from __future__ import annotations

import csv
import json
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

#: probabilities are clamped to ``[EPSILON, 1]`` before taking logs in default mode
EPSILON = 1e-9
#: tolerance for CPT rows summing to one in model files
ROW_SUM_TOL = 1e-6


class ModelError(ValueError):
    """Raised for malformed or invalid models; carries per-field diagnostics."""

    def __init__(self, message: str, diagnostics: Sequence[str] = ()):
        super().__init__(message)
        self.diagnostics = list(diagnostics) or [message]


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    values: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ModelError(f"attribute {self.name!r} has no values")
        if len(set(self.values)) != len(self.values):
            raise ModelError(f"attribute {self.name!r} has duplicate value names")

    @property
    def cardinality(self) -> int:
        return len(self.values)

    def index(self, value: str) -> int:
        try:
            return self.values.index(value)
        except ValueError:
            raise ModelError(f"attribute {self.name!r} has no value {value!r}") from None


@dataclass(frozen=True)
class NaiveBayesModel:
    """Binary-class naive Bayes network in log-odds space.

    ``weights[i][j]`` is the weight of evidence of value ``j`` of attribute
    ``i``. ``cpts`` optionally keeps the probability tables the weights came
    from (as ``(given_c, given_cbar)`` rows) so the model can be written back
    to a model file.
    """

    class_name: str
    class_values: tuple[str, str]
    prior_log_odds: float
    attributes: tuple[AttributeSpec, ...]
    weights: tuple[tuple[float, ...], ...]
    strict_zero: bool = False
    prior: float | None = None
    cpts: tuple[tuple[tuple[float, ...], tuple[float, ...]], ...] | None = field(
        default=None, compare=False
    )

    def __post_init__(self):
        object.__setattr__(self, "class_values", tuple(self.class_values))
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(
            self, "weights", tuple(tuple(float(w) for w in ws) for ws in self.weights)
        )
        object.__setattr__(self, "prior_log_odds", float(self.prior_log_odds))

    @property
    def n(self) -> int:
        return len(self.attributes)

    @property
    def cardinalities(self) -> list[int]:
        return [a.cardinality for a in self.attributes]

    @property
    def instance_count(self) -> int:
        return math.prod(self.cardinalities)

    def attribute_index(self, name: str) -> int:
        for i, a in enumerate(self.attributes):
            if a.name == name:
                return i
        raise ModelError(f"unknown attribute {name!r}")

    def with_prior_log_odds(self, log_odds: float) -> NaiveBayesModel:
        prior = None if math.isnan(log_odds) else logistic(log_odds)
        return replace(self, prior_log_odds=log_odds, prior=prior)

    def with_prior(self, p: float) -> NaiveBayesModel:
        return replace(self, prior_log_odds=_prior_log_odds(p, self.strict_zero), prior=p)

    def with_weights(self, attribute: int, weights: Sequence[float]) -> NaiveBayesModel:
        ws = list(self.weights)
        ws[attribute] = tuple(float(w) for w in weights)
        return replace(self, weights=tuple(ws), cpts=None)


def logistic(x: float) -> float:
    if x == math.inf:
        return 1.0
    if x == -math.inf:
        return 0.0
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def prob_to_log_odds(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie strictly between 0 and 1, got {p}")
    return math.log(p / (1.0 - p))


def weight_of_evidence(p_given_c: float, p_given_cbar: float, strict_zero: bool = False) -> float:
    """Log-likelihood ratio ``log(Pr(e|c) / Pr(e|cbar))``.

    In default mode both probabilities are clamped to ``[EPSILON, 1]`` so the
    result is always finite. In strict-zero mode a zero gives an infinite
    weight; both zero is undefined and raises.
    """
    for p in (p_given_c, p_given_cbar):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability out of range: {p}")
    if p_given_c == 0.0 and p_given_cbar == 0.0:
        raise ValueError("value has zero probability under both classes")
    if strict_zero:
        if p_given_c == 0.0:
            return -math.inf
        if p_given_cbar == 0.0:
            return math.inf
        return math.log(p_given_c / p_given_cbar)
    a = min(max(p_given_c, EPSILON), 1.0)
    b = min(max(p_given_cbar, EPSILON), 1.0)
    return math.log(a / b)


def _prior_log_odds(p: float, strict_zero: bool) -> float:
    if not 0.0 <= p <= 1.0:
        raise ModelError(f"class prior out of range: {p}")
    if strict_zero:
        if p == 0.0:
            return -math.inf
        if p == 1.0:
            return math.inf
        return prob_to_log_odds(p)
    q = min(max(p, EPSILON), 1.0 - EPSILON)
    return prob_to_log_odds(q)


@dataclass
class ValidationResult:
    errors: list[str]

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self) -> bool:
        return self.ok

    def raise_if_invalid(self):
        if self.errors:
            raise ModelError("; ".join(self.errors), self.errors)


def validate_model(model: NaiveBayesModel) -> ValidationResult:
    errors = []
    if len(model.class_values) != 2:
        errors.append(
            f"class {model.class_name!r} must have exactly two values, "
            f"got {len(model.class_values)}"
        )
    if math.isnan(model.prior_log_odds):
        errors.append("class prior log-odds is NaN")
    elif not model.strict_zero and not math.isfinite(model.prior_log_odds):
        errors.append("class prior log-odds is infinite (only allowed in strict-zero mode)")
    if len(model.weights) != len(model.attributes):
        errors.append(
            f"{len(model.weights)} weight rows for {len(model.attributes)} attributes"
        )
    names = [a.name for a in model.attributes]
    for dup in sorted(k for k, c in Counter(names).items() if c > 1):
        errors.append(f"duplicate attribute name {dup!r}")
    for attr, ws in zip(model.attributes, model.weights):
        if len(ws) != attr.cardinality:
            errors.append(
                f"attribute {attr.name!r}: {len(ws)} weights for {attr.cardinality} values"
            )
            continue
        for value, w in zip(attr.values, ws):
            if math.isnan(w):
                errors.append(f"attribute {attr.name!r} value {value!r}: weight is NaN")
            elif not model.strict_zero and not math.isfinite(w):
                errors.append(
                    f"attribute {attr.name!r} value {value!r}: infinite weight "
                    "(only allowed in strict-zero mode)"
                )
    if model.cpts is not None:
        for attr, (gc, gcb) in zip(model.attributes, model.cpts):
            for value, a, b in zip(attr.values, gc, gcb):
                if a == 0.0 and b == 0.0:
                    errors.append(
                        f"attribute {attr.name!r} value {value!r}: "
                        "zero probability under both classes"
                    )
    return ValidationResult(errors)


def check_instance(model: NaiveBayesModel, instance: Sequence[int]) -> None:
    if len(instance) != model.n:
        raise ModelError(f"instance has {len(instance)} values, model has {model.n} attributes")
    for attr, v in zip(model.attributes, instance):
        if not 0 <= v < attr.cardinality:
            raise ModelError(f"value index {v} out of range for attribute {attr.name!r}")


def log_odds_of_instance(model: NaiveBayesModel, instance: Sequence[int]) -> float:
    # left fold in attribute order; every other code path reproduces this order
    check_instance(model, instance)
    total = model.prior_log_odds
    for ws, v in zip(model.weights, instance):
        total += ws[v]
    return total


def classify(model: NaiveBayesModel, rho: float, instance: Sequence[int]) -> int:
    return int(log_odds_of_instance(model, instance) >= rho)


# --- construction ---------------------------------------------------------


def model_from_probabilities(
    prior: float,
    attributes: Sequence[AttributeSpec],
    cpts: Sequence[tuple[Sequence[float], Sequence[float]]],
    *,
    class_name: str = "C",
    class_values: Sequence[str] = ("c", "cbar"),
    strict_zero: bool = False,
) -> NaiveBayesModel:
    """Build a model from a class prior and ``(given_c, given_cbar)`` CPT rows."""
    errors = []
    if len(class_values) != 2:
        raise ModelError(
            f"class {class_name!r} must have exactly two values, got {len(class_values)}"
        )
    if len(cpts) != len(attributes):
        raise ModelError(f"{len(cpts)} CPTs for {len(attributes)} attributes")
    weights = []
    for attr, (gc, gcb) in zip(attributes, cpts):
        row = []
        for label, col in (("given_c", gc), ("given_cbar", gcb)):
            if len(col) != attr.cardinality:
                errors.append(
                    f"attribute {attr.name!r}: {label} has {len(col)} entries, "
                    f"expected {attr.cardinality}"
                )
            elif any(not 0.0 <= p <= 1.0 for p in col):
                errors.append(f"attribute {attr.name!r}: {label} has entries outside [0, 1]")
            elif abs(sum(col) - 1.0) > ROW_SUM_TOL:
                errors.append(f"attribute {attr.name!r}: {label} sums to {sum(col):.9g}, not 1")
        if errors:
            continue
        for value, a, b in zip(attr.values, gc, gcb):
            if a == 0.0 and b == 0.0:
                errors.append(
                    f"attribute {attr.name!r} value {value!r}: zero probability under both classes"
                )
            else:
                row.append(weight_of_evidence(a, b, strict_zero))
        weights.append(tuple(row))
    if errors:
        raise ModelError("; ".join(errors), errors)
    model = NaiveBayesModel(
        class_name=class_name,
        class_values=tuple(class_values),
        prior_log_odds=_prior_log_odds(prior, strict_zero),
        attributes=tuple(attributes),
        weights=tuple(weights),
        strict_zero=strict_zero,
        prior=float(prior),
        cpts=tuple((tuple(map(float, gc)), tuple(map(float, gcb))) for gc, gcb in cpts),
    )
    validate_model(model).raise_if_invalid()
    return model


def model_from_dict(doc: dict, strict_zero: bool = False) -> NaiveBayesModel:
    try:
        cls = doc["class"]
        class_name = str(cls["name"])
        class_values = [str(v) for v in cls["values"]]
        prior = float(cls["prior"])
        raw_attrs = doc["attributes"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"model document missing or malformed field: {exc}") from None
    if len(class_values) != 2:
        raise ModelError(
            f"class.values: class {class_name!r} must have exactly two values, "
            f"got {len(class_values)}"
        )
    attributes, cpts = [], []
    for k, a in enumerate(raw_attrs):
        try:
            attr = AttributeSpec(str(a["name"]), tuple(str(v) for v in a["values"]))
            gc = [float(p) for p in a["cpt"]["given_c"]]
            gcb = [float(p) for p in a["cpt"]["given_cbar"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelError(f"attributes[{k}]: missing or malformed field {exc}") from None
        attributes.append(attr)
        cpts.append((gc, gcb))
    return model_from_probabilities(
        prior,
        attributes,
        cpts,
        class_name=class_name,
        class_values=class_values,
        strict_zero=strict_zero,
    )


def model_to_dict(model: NaiveBayesModel) -> dict:
    if model.cpts is None or model.prior is None:
        raise ModelError("model has no probability tables to serialize")
    return {
        "class": {
            "name": model.class_name,
            "values": list(model.class_values),
            "prior": model.prior,
        },
        "attributes": [
            {
                "name": attr.name,
                "values": list(attr.values),
                "cpt": {"given_c": list(gc), "given_cbar": list(gcb)},
            }
            for attr, (gc, gcb) in zip(model.attributes, model.cpts)
        ],
    }


def load_model(path: str | Path, strict_zero: bool = False) -> NaiveBayesModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return model_from_dict(doc, strict_zero=strict_zero)


def save_model(model: NaiveBayesModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=2) + "\n", encoding="utf-8")


def generate_random_model(
    n: int,
    cardinalities: Sequence[int] | int = 2,
    seed: int | np.random.SeedSequence | None = None,
) -> NaiveBayesModel:
    """Random model with parameters drawn uniformly in probability space.

    The prior and each binary column ``Pr(E=e0|c)``, ``Pr(E=e0|cbar)`` are
    uniform on (0, 1); wider columns are uniform on the simplex.
    """
    if n < 0:
        raise ValueError("attribute count must be non-negative")
    if isinstance(cardinalities, int):
        cardinalities = [cardinalities] * n
    if len(cardinalities) != n:
        raise ValueError(f"{len(cardinalities)} cardinalities for {n} attributes")
    rng = np.random.default_rng(seed)
    prior = float(rng.uniform())
    attributes, cpts = [], []
    for i, b in enumerate(cardinalities):
        if b < 1:
            raise ValueError("cardinality must be at least 1")
        attributes.append(AttributeSpec(f"E{i + 1}", tuple(f"v{j}" for j in range(b))))
        if b == 2:
            p, q = rng.uniform(size=2)
            cpts.append(((p, 1.0 - p), (q, 1.0 - q)))
        else:
            gc, gcb = rng.dirichlet(np.ones(b), size=2)
            cpts.append((tuple(gc), tuple(gcb)))
    return model_from_probabilities(prior, attributes, cpts)


# --- learning -------------------------------------------------------------


def learn_from_rows(
    header: Sequence[str],
    rows: Iterable[Sequence[str]],
    class_column: str,
    smoothing: float = 1.0,
    positive: str | None = None,
) -> NaiveBayesModel:
    """Maximum-likelihood CPTs with additive smoothing from categorical rows.

    Value sets are taken from the data in order of first appearance. The
    positive class is ``positive`` if given, else the first class value seen.
    """
    if smoothing < 0:
        raise ValueError("smoothing must be non-negative")
    header = list(header)
    if class_column not in header:
        raise ModelError(f"class column {class_column!r} not in header")
    ci = header.index(class_column)
    attr_cols = [j for j in range(len(header)) if j != ci]
    rows = [list(r) for r in rows]
    if not rows:
        raise ModelError("dataset is empty")
    for k, r in enumerate(rows):
        if len(r) != len(header):
            raise ModelError(f"row {k + 2}: expected {len(header)} fields, got {len(r)}")

    class_values = list(dict.fromkeys(r[ci] for r in rows))
    if len(class_values) != 2:
        raise ModelError(
            f"class column {class_column!r} must have exactly 2 values, "
            f"found {len(class_values)}: {class_values}"
        )
    if positive is not None:
        if positive not in class_values:
            raise ModelError(f"positive class {positive!r} not present in data")
        class_values.remove(positive)
        class_values.insert(0, positive)
    c, cbar = class_values

    n_c = sum(1 for r in rows if r[ci] == c)
    n_cbar = len(rows) - n_c
    prior = (n_c + smoothing) / (len(rows) + 2 * smoothing)

    attributes, cpts = [], []
    for j in attr_cols:
        values = tuple(dict.fromkeys(r[j] for r in rows))
        counts = Counter((r[j], r[ci]) for r in rows)
        b = len(values)
        gc = [(counts[(v, c)] + smoothing) / (n_c + b * smoothing) for v in values]
        gcb = [(counts[(v, cbar)] + smoothing) / (n_cbar + b * smoothing) for v in values]
        attributes.append(AttributeSpec(header[j], values))
        cpts.append((gc, gcb))
    return model_from_probabilities(
        prior, attributes, cpts, class_name=class_column, class_values=(c, cbar)
    )


def learn_from_csv(
    path: str | Path,
    class_column: str,
    smoothing: float = 1.0,
    positive: str | None = None,
) -> NaiveBayesModel:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ModelError(f"{path}: empty file") from None
        rows = [r for r in reader if r]
    return learn_from_rows(header, rows, class_column, smoothing, positive)
