"""Exact Kraft-matrix analysis for finite-state encoders.

Structured arguments (encoders, predictors, quantizers, losses, matrix
families) are plain dicts following the JSON schemas in the README, or
pre-serialized JSON strings. Results come back as dicts. Exact dyadic
values appear as ``{"m": "<decimal mantissa>", "e": exponent}``, meaning
m / 2**e; ``dyadic_value`` turns one into a ``Fraction``.

Library errors raise ``ValueError`` (malformed input, violated
precondition) or ``RuntimeError`` (enumeration budget exhausted).
"""

import json as _json
from fractions import Fraction as _Fraction
from pathlib import Path as _Path

from . import _kraftlab as _native

__version__ = "0.1.0"

__all__ = [
    "load",
    "dyadic_value",
    "validate",
    "kraft_matrix",
    "matrix_power",
    "gki",
    "check_il",
    "spectral",
    "jsr",
    "encode",
    "rate_bound",
    "lz78",
    "lz_rate_bound",
    "default_epsilon",
    "epsilon_label",
    "delta",
    "phi_of_d",
    "ball_size",
    "b_ell",
    "lossy_check",
    "zl_baseline",
    "min_state_kraft_sum",
    "predictive_code",
]


def _dump(doc):
    if doc is None:
        return ""
    if isinstance(doc, str):
        return doc
    return _json.dumps(doc)


def load(path):
    """Read a JSON document from a file."""
    return _json.loads(_Path(path).read_text())


def dyadic_value(d):
    """Exact value of a ``{"m", "e"}`` dyadic as a Fraction."""
    return _Fraction(int(d["m"]), 2 ** int(d["e"]))


def validate(doc, loss=None):
    """Parse a document of any supported kind and report its parameters."""
    return _json.loads(_native.validate(_dump(doc), _dump(loss)))


def kraft_matrix(encoder):
    """Exact Kraft matrix, row sums, spectral radius, irreducibility."""
    return _json.loads(_native.kraft(_dump(encoder)))


def matrix_power(encoder, n):
    """Exact n-th power of the encoder's Kraft matrix."""
    return _json.loads(_native.matrix_power(_dump(encoder), n))


def gki(encoder, ells=(1, 2, 4, 8), budget=0):
    """Every generalized Kraft inequality, one record per check."""
    return _json.loads(_native.gki(_dump(encoder), list(ells), budget))


def check_il(doc, depth=8, budget=0):
    """Exhaustive collision search; accepts encoders and si-encoders."""
    return _json.loads(_native.il(_dump(doc), depth, budget))


def spectral(doc, tol=1e-9):
    """Spectral radius per Kraft matrix of an encoder, si-encoder, or family."""
    return _json.loads(_native.spectral(_dump(doc), tol))


def jsr(doc, depth=8, seed=1, budget=0):
    """Joint-spectral-radius bracket plus the boundedness certificate."""
    return _json.loads(_native.jsr(_dump(doc), depth, seed, budget))


def encode(encoder, xs, start=None):
    """Run the encoder on a symbol-index sequence."""
    return _json.loads(
        _native.encode(_dump(encoder), list(xs), -1 if start is None else start)
    )


def rate_bound(encoder, xs, ells=(1, 2, 4, 8), start=None):
    """Individual-sequence compression-rate floor against the achieved rate."""
    return _json.loads(
        _native.rate_bound(
            _dump(encoder), list(xs), list(ells), -1 if start is None else start
        )
    )


def lz78(xs):
    """Incremental parse: distinct-phrase count and the phrase spans."""
    return _json.loads(_native.lz78(list(xs)))


def lz_rate_bound(c, n, ell=8, states=1, l_max=1, epsilon=None):
    """Phrase-count rate floor; the default vanishing term is a labeled
    heuristic, not a derived bound."""
    if epsilon is None:
        eps = _native.default_epsilon(n)
        label = _native.epsilon_label()
    else:
        eps = epsilon
        label = "user-supplied"
    return {
        "bound": _native.lz_rate_bound(c, n, ell, states, l_max, eps),
        "epsilon": eps,
        "epsilon_label": label,
    }


def default_epsilon(n):
    return _native.default_epsilon(n)


def epsilon_label():
    return _native.epsilon_label()


def delta(loss, rate_bits):
    """Loss floor Delta(R); ``loss`` is an alphabet size (Hamming) or a
    loss table document."""
    if isinstance(loss, int):
        return _native.delta_hamming(loss, rate_bits)
    return _native.delta(_dump(loss), rate_bits)


def phi_of_d(distortion, D):
    """Largest conditional entropy compatible with distortion level D."""
    return _native.phi_of_d(_dump(distortion), D)


def ball_size(distortion, word, D, budget=0):
    """Source words within per-block distortion len(word) * D of ``word``."""
    return _native.ball_size(_dump(distortion), list(word), D, budget)


def b_ell(distortion, ell, D, budget=0):
    """Largest distortion ball over all reproduction words of length ell."""
    return _native.b_ell(_dump(distortion), ell, D, budget)


def lossy_check(quantizer, coder, distortion=None, D=None, budget=0):
    """Kraft chain for a quantize-then-code scheme."""
    return _json.loads(
        _native.lossy(
            _dump(quantizer),
            _dump(coder),
            _dump(distortion),
            -1.0 if D is None else D,
            budget,
        )
    )


def zl_baseline(states, alphabet, ell):
    """State-oblivious Kraft-sum baseline s^2 (1 + log2(1 + a^ell / s^2))."""
    return _native.zl_baseline(states, alphabet, ell)


def min_state_kraft_sum(encoder, ell, budget=0):
    """Exact sum of 2^-(best output length over start states) per block."""
    return _json.loads(_native.min_state_kraft_sum(_dump(encoder), ell, budget))


def predictive_code(predictor, xs, loss=None, theta=1.0, k=8):
    """Predictor run plus the per-block predictive code-length bound."""
    return _json.loads(
        _native.predictive_code(_dump(predictor), list(xs), _dump(loss), theta, k)
    )
