"""Simulated-annealing sampler for QUBOs.

Metropolis single-flip sweeps under a geometric inverse-temperature
schedule. Every read draws its random stream from (seed, read-index), so
results are bit-identical regardless of how reads are scheduled across
worker threads. The inner loop is numba-compiled.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .qubo import Qubo


class AnnealError(ValueError):
    pass


@dataclass
class AnnealParams:
    num_reads: int = 1000
    sweeps: int = 1000
    beta_range: tuple[float, float] | None = None
    seed: int = 0
    workers: int = 1
    time_limit: float | None = None
    randomize_order: bool = False

    def validate(self) -> None:
        if self.num_reads < 1:
            raise AnnealError(f"num_reads must be >= 1, got {self.num_reads}")
        if self.sweeps < 1:
            raise AnnealError(f"sweeps must be >= 1, got {self.sweeps}")
        if self.workers < 1:
            raise AnnealError(f"workers must be >= 1, got {self.workers}")
        if self.beta_range is not None:
            hot, cold = self.beta_range
            if not 0 < hot < cold:
                raise AnnealError(f"need 0 < beta_hot < beta_cold, got {self.beta_range}")


@dataclass
class SampleSet:
    records: list[tuple[dict[str, int], float, int]]  # (assignment, energy, read)
    params: AnnealParams
    elapsed: float
    truncated: bool = False

    @property
    def best(self) -> tuple[dict[str, int], float, int]:
        return self.records[0]


def auto_beta_range(q: Qubo) -> tuple[float, float]:
    """Hot/cold endpoints from the largest and smallest single-flip
    energy magnitudes; fixed fallback for an all-zero Qubo."""
    delta = {v: abs(q.linear.get(v, 0)) for v in q.variables}
    for (u, v), c in q.quadratic.items():
        delta[u] += abs(c)
        delta[v] += abs(c)
    nonzero = [d for d in delta.values() if d > 0]
    if not nonzero:
        return 0.1, 10.0
    beta_hot = math.log(2) / max(nonzero)
    beta_cold = math.log(1000) / max(min(nonzero), 1e-9)
    if beta_cold <= beta_hot:
        beta_cold = beta_hot * 1000.0
    return beta_hot, beta_cold


def frozen_beta_range(q: Qubo) -> tuple[float, float]:
    """Beta endpoints with a hard-frozen final phase: the hot end accepts
    the largest single flip with probability 1/2, the cold end leaves even
    the smallest nonzero coefficient at acceptance 1/1000. Deeper than
    auto_beta_range; the better default for penalty-dominated QUBOs."""
    hot, _ = auto_beta_range(q)
    magnitudes = [abs(c) for c in q.linear.values()]
    magnitudes += [abs(c) for c in q.quadratic.values()]
    nonzero = [m for m in magnitudes if m > 0]
    if not nonzero:
        return 0.1, 10.0
    cold = math.log(1000) / min(nonzero)
    if cold <= hot:
        cold = hot * 1000.0
    return hot, cold


@njit(cache=True, nogil=True)
def _anneal_batch(seed, read_start, read_count, betas, linear, indptr, nbr, nval,
                  randomize_order):
    n = linear.shape[0]
    states = np.zeros((read_count, n), dtype=np.int8)
    energies = np.zeros(read_count, dtype=np.float64)

    def next_uniform(s):
        s = s + np.uint64(0x9E3779B97F4A7C15)
        z = s
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
        return s, (z >> np.uint64(11)) * (1.0 / 9007199254740992.0)

    for r in range(read_count):
        read = read_start + r
        order = np.arange(n)
        # splitmix64 stream keyed on (seed, read-index)
        s = np.uint64(seed) * np.uint64(0x9E3779B97F4A7C15) ^ np.uint64(read + 1) * np.uint64(0xBF58476D1CE4E5B9)

        x = states[r]
        for i in range(n):
            s, u = next_uniform(s)
            if u < 0.5:
                x[i] = 1

        energy = 0.0
        for i in range(n):
            if x[i] == 1:
                energy += linear[i]
                for p in range(indptr[i], indptr[i + 1]):
                    j = nbr[p]
                    if j > i and x[j] == 1:
                        energy += nval[p]

        for sweep in range(betas.shape[0]):
            beta = betas[sweep]
            if randomize_order:
                for i in range(n - 1, 0, -1):
                    s, u = next_uniform(s)
                    j = int(u * (i + 1))
                    order[i], order[j] = order[j], order[i]
            for oi in range(n):
                i = order[oi]
                field = linear[i]
                for p in range(indptr[i], indptr[i + 1]):
                    if x[nbr[p]] == 1:
                        field += nval[p]
                de = (1 - 2 * x[i]) * field
                if de <= 0.0:
                    x[i] = 1 - x[i]
                    energy += de
                else:
                    arg = beta * de
                    if arg < 45.0:
                        s, u = next_uniform(s)
                        if u < math.exp(-arg):
                            x[i] = 1 - x[i]
                            energy += de
        energies[r] = energy
    return states, energies


def _compile_arrays(q: Qubo):
    n = len(q.variables)
    idx = {v: i for i, v in enumerate(q.variables)}
    linear = np.zeros(n, dtype=np.float64)
    for v, c in q.linear.items():
        linear[idx[v]] = c
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (u, v), c in q.quadratic.items():
        adj[idx[u]].append((idx[v], c))
        adj[idx[v]].append((idx[u], c))
    indptr = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        indptr[i + 1] = indptr[i] + len(adj[i])
    nbr = np.zeros(indptr[-1], dtype=np.int64)
    nval = np.zeros(indptr[-1], dtype=np.float64)
    pos = 0
    for i in range(n):
        for j, c in sorted(adj[i]):
            nbr[pos] = j
            nval[pos] = c
            pos += 1
    return linear, indptr, nbr, nval


def anneal(q: Qubo, params: AnnealParams | None = None) -> SampleSet:
    params = params or AnnealParams()
    params.validate()
    if not q.variables:
        raise AnnealError("qubo has no variables")
    start = time.perf_counter()
    hot, cold = params.beta_range if params.beta_range is not None else auto_beta_range(q)
    if params.sweeps == 1:
        betas = np.array([cold], dtype=np.float64)
    else:
        betas = np.geomspace(hot, cold, params.sweeps)
    linear, indptr, nbr, nval = _compile_arrays(q)
    seed64 = np.uint64(params.seed & 0xFFFFFFFFFFFFFFFF)

    # Reads are chunked so the time limit is checked between batches and
    # worker threads can share the load; per-read streams keep the output
    # independent of the chunking.
    chunk = 32
    starts = list(range(0, params.num_reads, chunk))

    def run(read_start: int):
        count = min(chunk, params.num_reads - read_start)
        states, energies = _anneal_batch(seed64, read_start, count, betas, linear,
                                         indptr, nbr, nval, params.randomize_order)
        return read_start, states, energies

    results = []
    truncated = False
    if params.workers == 1:
        for read_start in starts:
            if params.time_limit is not None and time.perf_counter() - start > params.time_limit:
                truncated = True
                break
            results.append(run(read_start))
    else:
        with ThreadPoolExecutor(max_workers=params.workers) as pool:
            pending = []
            for read_start in starts:
                if params.time_limit is not None and time.perf_counter() - start > params.time_limit:
                    truncated = True
                    break
                pending.append(pool.submit(run, read_start))
            results = [f.result() for f in pending]

    records = []
    for read_start, states, energies in results:
        for r in range(states.shape[0]):
            asg = {v: int(states[r, i]) for i, v in enumerate(q.variables)}
            records.append((asg, float(energies[r]) + q.offset, read_start + r))
    records.sort(key=lambda rec: (rec[1], rec[2]))
    return SampleSet(records, params, time.perf_counter() - start, truncated)
