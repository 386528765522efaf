"""Exact word-probability evaluation, enumeration, sampling, and moment sums."""

from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .exceptions import EnumerationCapError, UnderflowError
from .models import ClassicalHmm, Qhmm
from .tolerances import DEFAULT_TOL

__all__ = [
    "Word",
    "as_word",
    "WordDistribution",
    "word_prob_classical",
    "word_prob_quantum",
    "word_probability",
    "enumerate_distribution",
    "squared_moment",
    "sample",
    "sample_many",
    "DEFAULT_ENUMERATION_CAP",
]

Word = tuple[str, ...]

DEFAULT_ENUMERATION_CAP = 10**6

# Imaginary parts of quantum traces beyond this signal an invalid model.
_IMAG_TOL = 1e-10

_MIN_PREFIX_PROB = 1e-300


def as_word(model: ClassicalHmm | Qhmm, word: str | Iterable[str]) -> Word:
    """Coerce ``word`` to a tuple of alphabet symbols.

    Strings are split into characters, which is convenient for the common
    single-character alphabets; any other iterable is taken symbol by symbol.
    Unknown symbols raise :class:`UnknownSymbolError`.
    """
    symbols = tuple(word)
    for s in symbols:
        model.alphabet.index(s)
    return symbols


def _apply_classical(model: ClassicalHmm, state: np.ndarray, symbol: str) -> np.ndarray:
    return model.transition[symbol] @ state


def _apply_quantum(model: Qhmm, rho: np.ndarray, symbol: str) -> np.ndarray:
    ops = model.kraus[symbol]
    out = ops[0] @ rho @ ops[0].conj().T
    for op in ops[1:]:
        out += op @ rho @ op.conj().T
    return out


def word_prob_classical(model: ClassicalHmm, word: str | Iterable[str]) -> float:
    """Probability of ``word``: all-ones row times the transition product times the initial vector."""
    state = model.initial
    for symbol in as_word(model, word):
        state = _apply_classical(model, state, symbol)
    return float(min(max(state.sum(), 0.0), 1.0))


def word_prob_quantum(model: Qhmm, word: str | Iterable[str]) -> float:
    """Probability of ``word``: trace of the composed symbol maps applied to the initial state."""
    rho = model.initial
    for symbol in as_word(model, word):
        rho = _apply_quantum(model, rho, symbol)
    trace = complex(np.trace(rho))
    if abs(trace.imag) > _IMAG_TOL:
        raise ValueError(
            f"word probability has imaginary part {trace.imag:.3g}; the model is not a valid instrument"
        )
    return float(min(max(trace.real, 0.0), 1.0))


def word_probability(model: ClassicalHmm | Qhmm, word: str | Iterable[str]) -> float:
    """Dispatch to the classical or quantum evaluator."""
    if isinstance(model, ClassicalHmm):
        return word_prob_classical(model, word)
    return word_prob_quantum(model, word)


@dataclass(frozen=True)
class WordDistribution:
    """Exhaustive distribution over all words of one length.

    Probabilities are clamped to zero from below at reporting time; the
    normalization residual is checked at construction.
    """

    length: int
    probabilities: dict[Word, float]

    def total(self) -> float:
        return float(sum(self.probabilities.values()))

    def as_rows(self) -> list[tuple[str, float]]:
        """(joined word, probability) pairs in enumeration order."""
        return [("".join(w), p) for w, p in self.probabilities.items()]


def _check_cap(alphabet_size: int, length: int, cap: int) -> None:
    if alphabet_size**length > cap:
        raise EnumerationCapError(
            f"enumerating {alphabet_size}**{length} words exceeds cap {cap}"
        )


def enumerate_distribution(
    model: ClassicalHmm | Qhmm,
    length: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> WordDistribution:
    """All length-``length`` word probabilities, in lexicographic alphabet order.

    Prefix states are reused along a depth-first traversal, so the cost is
    one symbol application per tree node rather than per word.
    """
    if length < 0:
        raise ValueError("length must be nonnegative")
    _check_cap(len(model.alphabet), length, cap)
    classical = isinstance(model, ClassicalHmm)
    probs: dict[Word, float] = {}
    eps = DEFAULT_TOL.eps_prob

    def leaf_probability(state: np.ndarray) -> float:
        if classical:
            value = float(state.sum())
        else:
            trace = complex(np.trace(state))
            if abs(trace.imag) > _IMAG_TOL:
                raise ValueError("enumeration produced a non-real probability")
            value = trace.real
        if value < -eps:
            raise ValueError(f"enumeration produced probability {value:.3g} below -eps_prob")
        return min(max(value, 0.0), 1.0)

    def walk(prefix: Word, state: np.ndarray) -> None:
        if len(prefix) == length:
            probs[prefix] = leaf_probability(state)
            return
        for symbol in model.alphabet:
            if classical:
                walk(prefix + (symbol,), _apply_classical(model, state, symbol))
            else:
                walk(prefix + (symbol,), _apply_quantum(model, state, symbol))

    walk((), model.initial)
    dist = WordDistribution(length, probs)
    residual = abs(dist.total() - 1.0)
    if residual > eps:
        raise ValueError(f"distribution normalization residual {residual:.3g} exceeds eps_prob")
    return dist


def squared_moment(
    model: ClassicalHmm | Qhmm,
    length: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> float:
    """Sum of squared word probabilities at one length, by enumeration.

    This is the brute-force side of the transfer-operator moment identity
    and serves as its oracle in the tests.
    """
    dist = enumerate_distribution(model, length, cap)
    return float(sum(p * p for p in dist.probabilities.values()))


def _sample_one(model: ClassicalHmm | Qhmm, length: int, rng: np.random.Generator) -> Word:
    classical = isinstance(model, ClassicalHmm)
    state = model.initial
    prefix_prob = 1.0
    word: list[str] = []
    for _ in range(length):
        branches = []
        weights = []
        for symbol in model.alphabet:
            if classical:
                nxt = _apply_classical(model, state, symbol)
                weight = float(nxt.sum())
            else:
                nxt = _apply_quantum(model, state, symbol)
                weight = float(np.trace(nxt).real)
            branches.append(nxt)
            weights.append(max(weight, 0.0))
        total = sum(weights)
        if total < _MIN_PREFIX_PROB:
            raise UnderflowError("running prefix probability underflowed while sampling")
        pick = rng.random() * total
        cumulative = 0.0
        index = len(weights) - 1
        for k, weight in enumerate(weights):
            cumulative += weight
            if pick < cumulative:
                index = k
                break
        prefix_prob *= weights[index] / total
        if prefix_prob < _MIN_PREFIX_PROB:
            raise UnderflowError("running prefix probability underflowed while sampling")
        # Renormalize the conditional state to keep weights well scaled.
        state = branches[index] / total
        word.append(model.alphabet.symbols[index])
    return tuple(word)


def sample(model: ClassicalHmm | Qhmm, length: int, seed: int) -> Word:
    """Draw one length-``length`` word from the model, deterministic in ``seed``.

    Symbols are drawn sequentially from the conditional next-symbol
    distribution of the current (renormalized) memory state, so the word is
    an exact sample from the length-``length`` distribution.
    """
    return _sample_one(model, length, np.random.default_rng(seed))


def sample_many(model: ClassicalHmm | Qhmm, length: int, count: int, seed: int) -> list[Word]:
    """Draw ``count`` independent words from one seeded generator."""
    rng = np.random.default_rng(seed)
    return [_sample_one(model, length, rng) for _ in range(count)]
