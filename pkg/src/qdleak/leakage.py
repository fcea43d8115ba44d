"""What an eavesdropper learns from the public transcript alone.

The threat model is passive: the observer sees every public announcement,
knows the protocol completely, and holds no quantum access.  Starting from a
uniform prior over all secret assignments, the posterior keeps exactly the
assignments that could have produced the announced transcript, weighted by
the probability of producing it.  Leakage is quantified in bits:

    leaked = total secret bits - Shannon entropy of the posterior.

Reports carry both the per-transcript view and the ensemble average.  For
these protocols the per-transcript entropy is the same for every reachable
transcript, so the two coincide; tests assert this rather than assuming it.

The classical reference point OTP (two parties XOR-ing their plaintext bits
with one shared, reused key bit and announcing the ciphertexts) gets the
same treatment, so its structure can be compared with JZ's.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .protocols import (
    Protocol,
    SecretAssignment,
    Transcript,
    TranscriptError,
    all_secret_assignments,
    basis_labels_of,
    jz_outcome_label,
    mxn_encoded_state,
    nba_final_label,
    paired_bell_distribution,
    paired_bell_probability,
)
from .qstate import ATOL, KET_LABELS, BellLabel

PROB_FLOOR = 1e-9


def shannon_entropy(probabilities: Iterable[float]) -> float:
    """Entropy in bits of a probability vector; 0 * log 0 counts as 0."""
    p = np.asarray(list(probabilities), dtype=float)
    if p.size == 0:
        raise ValueError("empty distribution")
    if np.any(p < -1e-12):
        raise ValueError("negative probability")
    if abs(float(p.sum()) - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {float(p.sum())!r}, not 1")
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


@dataclass(frozen=True)
class Posterior:
    """The observer's belief after seeing one transcript: hypotheses with
    their probabilities, sorted by the parties' bit strings."""

    hypotheses: tuple[tuple[SecretAssignment, float], ...]

    @classmethod
    def from_weights(
        cls, weighted: Iterable[tuple[SecretAssignment, float]]
    ) -> "Posterior":
        items = [(s, w) for s, w in weighted if w > PROB_FLOOR]
        if not items:
            raise TranscriptError("no hypothesis is consistent with the transcript")
        total = sum(w for _, w in items)
        items = [(s, w / total) for s, w in items]
        items.sort(key=lambda pair: pair[0].full_bits)
        return cls(tuple(items))

    @property
    def support(self) -> frozenset[SecretAssignment]:
        return frozenset(s for s, _ in self.hypotheses)

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.hypotheses)

    @property
    def entropy_bits(self) -> float:
        return shannon_entropy(self.probabilities)

    def probability_of(self, secrets: SecretAssignment) -> float:
        for s, p in self.hypotheses:
            if s == secrets:
                return p
        return 0.0


def _transcript_weight(secrets: SecretAssignment, transcript: Transcript) -> float:
    """P(transcript | secrets): re-runs the transcript-production logic."""
    protocol = transcript.protocol
    if protocol is Protocol.NBA:
        initial, final = transcript.announced
        produced = nba_final_label(secrets.alice, secrets.others[0], initial)
        return 1.0 if produced == final else 0.0
    if protocol is Protocol.JZ:
        initial, outcome = transcript.announced
        produced = jz_outcome_label(secrets.alice[0], secrets.others[0][0], initial)
        return 1.0 if produced == outcome else 0.0
    if protocol is Protocol.MXN:
        return paired_bell_probability(mxn_encoded_state(secrets), transcript.announced)
    # OTP: average over the unknown shared key bit.
    ca, cb = (int(c) for c in transcript.announced)
    hits = sum(
        1
        for key in (0, 1)
        if (secrets.alice[0] ^ key, secrets.others[0][0] ^ key) == (ca, cb)
    )
    return hits / 2.0


def eve_posterior(transcript: Transcript) -> Posterior:
    """Posterior over all secret assignments given one public transcript,
    starting from a uniform prior."""
    parties = (
        len(transcript.announced) if transcript.protocol is Protocol.MXN else None
    )
    weighted = (
        (s, _transcript_weight(s, transcript))
        for s in all_secret_assignments(transcript.protocol, parties)
    )
    return Posterior.from_weights(weighted)


def nba_xor_constraint(transcript: Transcript) -> tuple[int, int]:
    """The bitwise XOR of the two parties' bits, which an NBA transcript
    reveals exactly: it is constant across the posterior's support."""
    if transcript.protocol is not Protocol.NBA:
        raise ValueError("needs an NBA transcript")
    posterior = eve_posterior(transcript)
    xors = {
        (s.alice[0] ^ s.others[0][0], s.alice[1] ^ s.others[0][1])
        for s in posterior.support
    }
    if len(xors) != 1:  # pragma: no cover - would signal a bug upstream
        raise RuntimeError(f"xor not constant across support: {xors!r}")
    return xors.pop()


def otp_reuse_posterior(cipher_a: int, cipher_b: int) -> Posterior:
    """Posterior over the two plaintext bits after both ciphertexts of a
    reused one-bit key are observed."""
    if cipher_a not in (0, 1) or cipher_b not in (0, 1):
        raise ValueError("ciphertext bits must be 0 or 1")
    transcript = Transcript(Protocol.OTP, (str(cipher_a), str(cipher_b)))
    return eve_posterior(transcript)


def jz_otp_equivalence(initial: str, outcome: str) -> bool:
    """Whether the JZ posterior for (initial, outcome) has the same
    structure as a reused-key OTP posterior: two hypotheses at 1/2 each,
    bitwise complements, entropy 1 bit, with the XOR of the bits pinned."""
    if initial not in KET_LABELS:
        raise ValueError(f"unknown ket label {initial!r}")
    if outcome not in basis_labels_of(initial):
        raise TranscriptError(
            f"outcome {outcome!r} is not in the preparation basis of {initial!r}"
        )
    jz_post = eve_posterior(Transcript(Protocol.JZ, (initial, outcome)))
    jz_pairs = {
        (s.alice[0], s.others[0][0]): p for s, p in jz_post.hypotheses
    }
    if len(jz_pairs) != 2:
        return False
    (pair_a, pair_b) = sorted(jz_pairs)
    if pair_b != (1 - pair_a[0], 1 - pair_a[1]):
        return False
    otp_post = otp_reuse_posterior(*pair_a)
    otp_pairs = {
        (s.alice[0], s.others[0][0]): p for s, p in otp_post.hypotheses
    }
    if set(otp_pairs) != set(jz_pairs):
        return False
    if any(abs(jz_pairs[k] - otp_pairs[k]) > ATOL for k in jz_pairs):
        return False
    return abs(jz_post.entropy_bits - otp_post.entropy_bits) <= ATOL


@dataclass(frozen=True)
class TranscriptLeakage:
    """Leakage numbers for a single transcript."""

    transcript: Transcript
    probability: float
    posterior: Posterior
    entropy_bits: float
    leaked_bits: float


@dataclass(frozen=True)
class LeakageReport:
    """Full audit of a protocol: every reachable transcript with its
    probability and posterior, plus ensemble totals in bits."""

    protocol: Protocol
    parties: int | None
    total_bits: int
    secure_bits: float
    leaked_bits: float
    per_transcript: tuple[TranscriptLeakage, ...]


def total_secret_bits(protocol: Protocol, parties: int | None = None) -> int:
    """How many secret bits one run of the protocol communicates in total."""
    if protocol is Protocol.NBA:
        return 4
    if protocol in (Protocol.JZ, Protocol.OTP):
        return 2
    if parties is None:
        raise ValueError("mxn needs a party count")
    return parties + 1


def _transcript_sort_key(transcript: Transcript):
    return tuple(
        label.text if isinstance(label, BellLabel) else str(label)
        for label in transcript.announced
    )


def leakage_report(protocol: Protocol, parties: int | None = None) -> LeakageReport:
    """Enumerate every reachable transcript (exactly, no sampling) under
    uniform secrets (and uniform initial state / key where one exists) and
    audit each one's posterior."""
    if protocol is not Protocol.MXN and parties not in (None, 2):
        raise ValueError(f"{protocol.text} has a fixed party count of 2")
    if protocol is Protocol.MXN and (parties is None or not 3 <= parties <= 6):
        raise ValueError("mxn audits need parties in 3..6")

    # transcript -> {assignment: P(transcript | assignment, public choices)}
    likelihoods: dict[Transcript, dict[SecretAssignment, float]] = {}
    assignments = all_secret_assignments(protocol, parties)

    if protocol is Protocol.NBA:
        contexts = [(label,) for label in BellLabel]
    elif protocol is Protocol.JZ:
        contexts = [(label,) for label in KET_LABELS]
    else:
        contexts = [()]

    for secrets in assignments:
        for context in contexts:
            if protocol is Protocol.NBA:
                (initial,) = context
                final = nba_final_label(secrets.alice, secrets.others[0], initial)
                branches = {Transcript(protocol, (initial, final)): 1.0}
            elif protocol is Protocol.JZ:
                (initial,) = context
                outcome = jz_outcome_label(
                    secrets.alice[0], secrets.others[0][0], initial
                )
                branches = {Transcript(protocol, (initial, outcome)): 1.0}
            elif protocol is Protocol.MXN:
                branches = {
                    Transcript(protocol, announced): prob
                    for announced, prob in paired_bell_distribution(
                        mxn_encoded_state(secrets)
                    ).items()
                }
            else:
                branches = {}
                for key in (0, 1):
                    announced = (
                        str(secrets.alice[0] ^ key),
                        str(secrets.others[0][0] ^ key),
                    )
                    t = Transcript(protocol, announced)
                    branches[t] = branches.get(t, 0.0) + 0.5
            weight = 1.0 / len(contexts)
            for t, prob in branches.items():
                bucket = likelihoods.setdefault(t, {})
                bucket[secrets] = bucket.get(secrets, 0.0) + prob * weight

    total = total_secret_bits(protocol, parties)
    prior = 1.0 / len(assignments)
    entries = []
    for t in sorted(likelihoods, key=_transcript_sort_key):
        weights = likelihoods[t]
        probability = prior * sum(weights.values())
        posterior = Posterior.from_weights(weights.items())
        entropy = posterior.entropy_bits
        entries.append(
            TranscriptLeakage(t, probability, posterior, entropy, total - entropy)
        )
    secure = sum(e.probability * e.entropy_bits for e in entries)
    return LeakageReport(
        protocol=protocol,
        parties=parties if protocol is Protocol.MXN else None,
        total_bits=total,
        secure_bits=secure,
        leaked_bits=total - secure,
        per_transcript=tuple(entries),
    )
