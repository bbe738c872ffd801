"""Fair random assignment under uncertain priorities."""

import json

from . import _core
from ._core import InputError, SizeGuardError

__all__ = ["InputError", "SizeGuardError", "solve", "audit", "lef_check", "decompose", "experiment"]


def _text(document):
    return document if isinstance(document, str) else json.dumps(document)


def solve(alg, instance):
    return json.loads(_core.solve(alg, _text(instance)))


def audit(prop, instance, assignment, lottery=None):
    return json.loads(_core.audit(prop, _text(instance), _text(assignment),
                                  None if lottery is None else _text(lottery)))


def lef_check(instance, assignment):
    return json.loads(_core.lef_check(_text(instance), _text(assignment)))


def decompose(instance, assignment):
    return json.loads(_core.decompose(_text(instance), _text(assignment)))


def experiment(students=35, disadvantaged=10, schools=2, bias_model="multiplicative", beta=0.5,
               q=200, trials=20, seed=0, threads=0):
    return _core.experiment(students, disadvantaged, schools, bias_model, beta, q, trials, seed, threads)
