"""Latent Dirichlet Allocation trained by collapsed Gibbs sampling.

Inference resamples one topic label per token per sweep from the count
statistics, with phi and theta integrated out. Point estimates come from
the final sweep's counts, which keeps runs bit-reproducible: the only
randomness is the PCG64 stream of the configured seed, consumed in a fixed
order (one uniform per token per sweep, after the initial assignment draw).
"""

from __future__ import annotations

import json
import struct
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .corpus import BowCorpus, Dictionary

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


class LdaError(ValueError):
    pass


@dataclass(frozen=True)
class LdaConfig:
    """Sampler settings. alpha=None resolves to the 50/K heuristic."""

    num_topics: int
    alpha: float | None = None
    beta: float = 0.01
    iterations: int = 1000
    burn_in: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.num_topics < 1:
            raise LdaError(f"num_topics must be >= 1, got {self.num_topics}")
        if self.alpha is not None and self.alpha <= 0:
            raise LdaError(f"alpha must be > 0, got {self.alpha}")
        if self.beta <= 0:
            raise LdaError(f"beta must be > 0, got {self.beta}")
        if self.iterations < 1:
            raise LdaError(f"iterations must be >= 1, got {self.iterations}")
        if not 0 <= self.burn_in < self.iterations:
            raise LdaError(
                f"burn_in must be in [0, iterations), got {self.burn_in}"
            )
        if not 0 <= self.seed < 2**64:
            raise LdaError("seed must be a 64-bit unsigned integer")

    @property
    def resolved_alpha(self) -> float:
        return 50.0 / self.num_topics if self.alpha is None else self.alpha


@dataclass(frozen=True)
class LdaModel:
    config: LdaConfig
    phi: np.ndarray  # (K, V) row-stochastic
    theta: np.ndarray  # (D, K) row-stochastic
    assignments: np.ndarray | None = None  # per-token topic labels, diagnostics
    log_likelihood_trace: np.ndarray | None = None  # one value per sweep

    @property
    def num_topics(self) -> int:
        return self.phi.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.phi.shape[1]

    @property
    def num_docs(self) -> int:
        return self.theta.shape[0]


@njit(cache=True)
def _gibbs_sweep(doc_of, term_of, z, n_dk, n_kw, n_k, alpha, beta, v_beta, uniforms, cum):
    num_topics = n_k.shape[0]
    for i in range(z.shape[0]):
        d = doc_of[i]
        w = term_of[i]
        k = z[i]
        n_dk[d, k] -= 1
        n_kw[k, w] -= 1
        n_k[k] -= 1
        total = 0.0
        for t in range(num_topics):
            total += (n_dk[d, t] + alpha) * (n_kw[t, w] + beta) / (n_k[t] + v_beta)
            cum[t] = total
        u = uniforms[i] * total
        new_k = num_topics - 1
        for t in range(num_topics):
            if u < cum[t]:
                new_k = t
                break
        z[i] = new_k
        n_dk[d, new_k] += 1
        n_kw[new_k, w] += 1
        n_k[new_k] += 1


def _expand_tokens(corpus: BowCorpus, vocab_size: int):
    doc_of, term_of = [], []
    for d, vec in enumerate(corpus.vectors):
        for term_id, count in vec:
            if not 0 <= term_id < vocab_size:
                raise LdaError(
                    f"corpus term id {term_id} out of range for vocabulary size {vocab_size}"
                )
            doc_of.extend([d] * count)
            term_of.extend([term_id] * count)
    return (
        np.asarray(doc_of, dtype=np.int32),
        np.asarray(term_of, dtype=np.int32),
    )


def _joint_log_likelihood(n_dk, n_kw, n_k, n_d, alpha, beta):
    num_docs, num_topics = n_dk.shape
    vocab_size = n_kw.shape[1]
    ll = num_topics * (gammaln(vocab_size * beta) - vocab_size * gammaln(beta))
    ll += gammaln(n_kw + beta).sum() - gammaln(n_k + vocab_size * beta).sum()
    ll += num_docs * (gammaln(num_topics * alpha) - num_topics * gammaln(alpha))
    ll += gammaln(n_dk + alpha).sum() - gammaln(n_d + num_topics * alpha).sum()
    return ll


def train_lda(corpus: BowCorpus, dictionary: Dictionary, config: LdaConfig) -> LdaModel:
    """Run the collapsed Gibbs sampler and return final-state point estimates.

    phi_kw = (n_kw + beta) / (n_k + V*beta), theta_dk = (n_dk + alpha) /
    (n_d + K*alpha); documents with no in-vocabulary tokens therefore get a
    uniform theta row. Identical (corpus, config) inputs yield bit-identical
    models.
    """
    vocab_size = dictionary.size
    num_docs = corpus.num_docs
    num_topics = config.num_topics
    alpha = config.resolved_alpha
    beta = config.beta

    doc_of, term_of = _expand_tokens(corpus, vocab_size)
    n_tokens = doc_of.shape[0]
    if num_docs == 0 or n_tokens == 0:
        raise LdaError("cannot train on an empty corpus (no in-vocabulary tokens)")
    if num_topics > n_tokens:
        warnings.warn(
            f"num_topics={num_topics} exceeds the corpus token count {n_tokens}",
            stacklevel=2,
        )

    rng = np.random.Generator(np.random.PCG64(config.seed))
    z = rng.integers(0, num_topics, size=n_tokens).astype(np.int32)

    n_dk = np.zeros((num_docs, num_topics), dtype=np.int64)
    n_kw = np.zeros((num_topics, vocab_size), dtype=np.int64)
    n_k = np.zeros(num_topics, dtype=np.int64)
    np.add.at(n_dk, (doc_of, z), 1)
    np.add.at(n_kw, (z, term_of), 1)
    np.add.at(n_k, z, 1)
    n_d = n_dk.sum(axis=1)

    cum = np.empty(num_topics, dtype=np.float64)
    v_beta = vocab_size * beta
    trace = np.empty(config.iterations, dtype=np.float64)
    for sweep in range(config.iterations):
        uniforms = rng.random(n_tokens)
        _gibbs_sweep(doc_of, term_of, z, n_dk, n_kw, n_k, alpha, beta, v_beta, uniforms, cum)
        if __debug__:
            assert (n_dk.sum(axis=1) == n_d).all(), "document count drift"
            assert (n_kw.sum(axis=1) == n_k).all(), "topic count drift"
            assert n_k.sum() == n_tokens, "token count drift"
        trace[sweep] = _joint_log_likelihood(n_dk, n_kw, n_k, n_d, alpha, beta)

    if not np.isfinite(trace).all():
        raise LdaError("non-finite log-likelihood encountered during training")

    phi = (n_kw + beta) / (n_k + v_beta)[:, None]
    theta = (n_dk + alpha) / (n_d + num_topics * alpha)[:, None]
    return LdaModel(
        config=config,
        phi=phi,
        theta=theta,
        assignments=z,
        log_likelihood_trace=trace,
    )


def perplexity(model: LdaModel, corpus: BowCorpus) -> float:
    """exp of the negative mean per-token log-likelihood on the given corpus."""
    if model.num_docs != corpus.num_docs:
        raise LdaError(
            f"model has {model.num_docs} documents, corpus has {corpus.num_docs}"
        )
    total_log = 0.0
    total_tokens = 0
    for d, vec in enumerate(corpus.vectors):
        if not vec:
            continue
        term_ids = np.fromiter((t for t, _ in vec), dtype=np.int64, count=len(vec))
        counts = np.fromiter((c for _, c in vec), dtype=np.int64, count=len(vec))
        probs = model.theta[d] @ model.phi[:, term_ids]
        assert (probs > 0).all(), "zero token probability in smoothed model"
        total_log += float(counts @ np.log(probs))
        total_tokens += int(counts.sum())
    if total_tokens == 0:
        raise LdaError("perplexity undefined on a corpus with no tokens")
    return float(np.exp(-total_log / total_tokens))


_MODEL_MAGIC = b"TFMODEL1"


def model_to_bytes(model: LdaModel, dictionary_hash: str = "", engine_version: str = "") -> bytes:
    """Serialize config + matrices into a single deterministic archive.

    Layout: 8-byte magic, uint32 little-endian header length, JSON header
    (sorted keys), then phi and theta as row-major little-endian float64.
    Diagnostic fields (assignments, trace) are not part of the archive.
    """
    header = {
        "schema_version": 1,
        "k": model.num_topics,
        "v": model.vocab_size,
        "d": model.num_docs,
        "alpha": model.config.resolved_alpha,
        "beta": model.config.beta,
        "iterations": model.config.iterations,
        "burn_in": model.config.burn_in,
        "seed": model.config.seed,
        "dictionary_hash": dictionary_hash,
        "engine_version": engine_version,
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return b"".join(
        [
            _MODEL_MAGIC,
            struct.pack("<I", len(header_bytes)),
            header_bytes,
            np.ascontiguousarray(model.phi, dtype="<f8").tobytes(),
            np.ascontiguousarray(model.theta, dtype="<f8").tobytes(),
        ]
    )


def model_from_bytes(data: bytes) -> tuple[LdaModel, dict]:
    """Inverse of model_to_bytes. Returns the model and its raw header."""
    if data[:8] != _MODEL_MAGIC:
        raise LdaError("not a topic model archive (bad magic)")
    (header_len,) = struct.unpack("<I", data[8:12])
    header = json.loads(data[12 : 12 + header_len].decode("utf-8"))
    if header.get("schema_version") != 1:
        raise LdaError(f"unsupported model schema version: {header.get('schema_version')}")
    k, v, d = header["k"], header["v"], header["d"]
    offset = 12 + header_len
    phi = np.frombuffer(data, dtype="<f8", count=k * v, offset=offset).reshape(k, v)
    theta = np.frombuffer(
        data, dtype="<f8", count=d * k, offset=offset + k * v * 8
    ).reshape(d, k)
    config = LdaConfig(
        num_topics=k,
        alpha=header["alpha"],
        beta=header["beta"],
        iterations=header["iterations"],
        burn_in=header["burn_in"],
        seed=header["seed"],
    )
    return LdaModel(config=config, phi=phi.copy(), theta=theta.copy()), header
