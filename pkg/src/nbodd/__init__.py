"""Naive Bayes classifiers compiled into ordered decision diagrams."""

from __future__ import annotations

from importlib import resources

from .compiler import CompilationResult, CompileError, compile_classifier, size_bound
from .interval import Interval, contains, intersect, offset, preimage
from .model import (
    AttributeSpec,
    ModelError,
    NaiveBayesModel,
    classify,
    generate_random_model,
    learn_from_csv,
    learn_from_rows,
    load_model,
    log_odds_of_instance,
    model_from_probabilities,
    prob_to_log_odds,
    save_model,
    validate_model,
    weight_of_evidence,
)
from .odd import Odd, deserialize, evaluate, export_dot, is_reduced, reduce, serialize
from .ops import (
    FeatureCondition,
    all_instances_satisfy,
    apply,
    complement,
    disagreement,
    equivalent,
    model_count,
)
from .oracle import enumerate_instances, oracle_classify_all
from .ordering import OrderingHeuristic, evidential_impact, make_order
from .sensitivity import (
    count_prior_classifiers,
    count_weight_classifiers,
    sensitivity_report,
    sweep_distinct_classifiers,
)


def example_model_path() -> str:
    """Path of the bundled four-variable pregnancy-test model."""
    return str(resources.files(__package__) / "data" / "pregnancy.json")


__all__ = [name for name in dir() if not name.startswith("_") and name != "resources"]
