"""Monte-Carlo fault-injection campaigns over a grid of cells.

Trials are generated in fixed-size chunks. Each chunk draws from its own
Philox stream keyed by (seed, l, eta, site, kind, both_split, chunk index),
so results do not depend on how chunks are spread over workers. The key
deliberately omits scheme and w: cells that differ only in those see the
same operands and faults, which makes their detection bits directly
comparable.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product

import numpy as np

from . import kernel
from .arith import make_params
from .faults import BOTH_SPLITS, FaultSpec, Kind, Site, evaluate_trial, parse_kind, parse_site
from .mbrfd import MODES
from .recomp import RENO_MODES, RESO_MODES, Scheme

CHUNK = 1 << 15
DEFAULT_SEED = 42
ENGINES = ("auto", "numpy", "scalar")

_SITE_CODE = {Site.ALPHA: 0, Site.BETA: 1, Site.BOTH: 2}
_KIND_CODE = {Kind.RANDOM: 0, Kind.BURST: 1}


def _as_list(value):
    return list(value) if isinstance(value, (list, tuple)) else [value]


@dataclass
class CampaignConfig:
    schemes: list[Scheme] = field(default_factory=lambda: [Scheme.RESWO])
    l: int = 24
    ws: list[int] = field(default_factory=lambda: [4, 8, 24])
    q: int = 3329
    etas: list[int] = field(default_factory=lambda: [1, 3, 5, 11, 17, 23])
    sites: list[Site] = field(default_factory=lambda: list(Site))
    kinds: list[Kind] = field(default_factory=lambda: list(Kind))
    samples: int = 1_500_000
    seed: int = DEFAULT_SEED
    mode: str = "corrected"
    reno_mode: str = "consistent"
    reso_mode: str = "consistent"
    both_split: str = "concat"
    strict: bool = False
    symmetric: bool = False

    def __post_init__(self):
        self.schemes = [Scheme.parse(s) for s in _as_list(self.schemes)]
        self.ws = [int(w) for w in _as_list(self.ws)]
        self.etas = [int(e) for e in _as_list(self.etas)]
        self.sites = [parse_site(s) for s in _as_list(self.sites)]
        self.kinds = [parse_kind(k) for k in _as_list(self.kinds)]
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if self.seed < 0 or self.seed >= 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.reno_mode not in RENO_MODES or self.reso_mode not in RESO_MODES:
            raise ValueError("unknown RENO/RESO mode")
        if self.both_split not in BOTH_SPLITS:
            raise ValueError(f"both_split must be one of {BOTH_SPLITS}")
        for w in self.ws:
            make_params(self.l, w, self.q)

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignConfig":
        data = dict(data)
        renames = {"scheme": "schemes", "w": "ws"}
        for old, new in renames.items():
            if old in data:
                data[new] = data.pop(old)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown campaign config fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "CampaignConfig":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        out = asdict(self)
        out["scheme"] = [s.value for s in out.pop("schemes")]
        out["w"] = out.pop("ws")
        out["sites"] = [s.value for s in self.sites]
        out["kinds"] = [k.value for k in self.kinds]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def cells(self):
        return list(product(self.schemes, self.ws, self.etas, self.sites, self.kinds))

    def spec(self, eta: int, site: Site, kind: Kind) -> FaultSpec:
        return FaultSpec(site, kind, eta, self.l, self.both_split)

    def mbrfd_opts(self) -> dict:
        return dict(mode=self.mode, reno_mode=self.reno_mode, reso_mode=self.reso_mode)


@dataclass
class CampaignStats:
    scheme: Scheme
    w: int
    eta: int
    site: Site
    kind: Kind
    samples: int
    detected: int
    applicable: bool = True
    oracle_mismatches: int = 0
    strict_detected: int = 0

    @property
    def missed(self) -> int:
        return self.samples - self.detected

    @property
    def efficiency(self) -> float | None:
        if not self.applicable or not self.samples:
            return None
        return 100.0 * self.detected / self.samples


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def chunk_rng(seed: int, spec: FaultSpec, chunk: int) -> np.random.Generator:
    key = [seed, spec.l, spec.eta, _SITE_CODE[spec.site], _KIND_CODE[spec.kind],
           BOTH_SPLITS.index(spec.both_split), chunk]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def _masks(kind: Kind, eta: int, width: int, size: int, rng: np.random.Generator) -> np.ndarray:
    if eta == 0:
        return np.zeros(size, dtype=np.int64)
    if kind is Kind.RANDOM:
        pos = np.argsort(rng.random((size, width)), axis=1)[:, :eta]
        return np.bitwise_or.reduce(np.left_shift(np.int64(1), pos), axis=1)
    start = rng.integers(0, width - eta + 1, size=size, dtype=np.int64)
    return np.left_shift(np.int64((1 << eta) - 1), start)


def sample_batch(spec: FaultSpec, size: int, rng: np.random.Generator):
    """Uniform operands on [0, 2^l) plus their faulty copies.

    Returns (alpha, beta, alpha_f, beta_f) as int64 arrays.
    """
    l = spec.l
    if 2 * l > 62:
        raise ValueError("batch sampling supports l <= 31")
    lmask = np.int64((1 << l) - 1)
    alpha = rng.integers(0, 1 << l, size=size, dtype=np.int64)
    beta = rng.integers(0, 1 << l, size=size, dtype=np.int64)
    if spec.site is Site.BOTH and spec.both_split == "per_operand":
        ma = _masks(spec.kind, spec.eta, l, size, rng)
        mb = _masks(spec.kind, spec.eta, l, size, rng)
    else:
        mask = _masks(spec.kind, spec.eta, spec.draw_width, size, rng)
        if spec.site is Site.ALPHA:
            ma, mb = mask, np.zeros_like(mask)
        elif spec.site is Site.BETA:
            ma, mb = np.zeros_like(mask), mask
        else:
            ma, mb = mask >> l, mask & lmask
    return alpha, beta, alpha ^ ma, beta ^ mb


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

def _resolve_engine(engine: str, params) -> str:
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}")
    if engine == "auto":
        return "numpy" if kernel.supports(params) else "scalar"
    return engine


def detect_batch(alpha, beta, alpha_f, beta_f, params, scheme, *, engine="auto",
                 symmetric=False, **opts):
    """Aggregate and per-iteration detection bits for a batch of trials."""
    rec_a, rec_b = (alpha_f, beta_f) if symmetric else (alpha, beta)
    if _resolve_engine(engine, params) == "numpy":
        rho, rho_f, strict = kernel.batch_mbrfd(alpha_f, beta_f, rec_a, rec_b, params,
                                                scheme, **opts)
        return rho != rho_f, strict
    detected = np.zeros(len(alpha), dtype=bool)
    strict = np.zeros(len(alpha), dtype=bool)
    for t, (a, b, af, bf) in enumerate(zip(alpha.tolist(), beta.tolist(),
                                           alpha_f.tolist(), beta_f.tolist())):
        detected[t], _, strict[t] = evaluate_trial(a, b, af, bf, params, scheme,
                                                   symmetric=symmetric, **opts)
    return detected, strict


@dataclass
class TrialBits:
    alpha: np.ndarray
    beta: np.ndarray
    alpha_f: np.ndarray
    beta_f: np.ndarray
    detected: np.ndarray
    strict: np.ndarray
    miss: np.ndarray


def _chunks(samples: int):
    for idx, start in enumerate(range(0, samples, CHUNK)):
        yield idx, min(CHUNK, samples - start)


def _run_chunk(task):
    params, scheme, spec, seed, chunk, size, opts, engine, symmetric = task
    a, b, af, bf = sample_batch(spec, size, chunk_rng(seed, spec, chunk))
    detected, strict = detect_batch(a, b, af, bf, params, scheme, engine=engine,
                                    symmetric=symmetric, **opts)
    miss = kernel.batch_miss(a, b, af, bf, params.q)
    return (int(detected.sum()), int(strict.sum()), int(np.count_nonzero(detected == miss)))


def cell_trials(params, scheme, spec: FaultSpec, samples: int, seed: int = DEFAULT_SEED, *,
                engine: str = "auto", symmetric: bool = False, **opts) -> TrialBits:
    """Per-trial results for one cell, chunk streams concatenated in order."""
    parts = []
    for chunk, size in _chunks(samples):
        a, b, af, bf = sample_batch(spec, size, chunk_rng(seed, spec, chunk))
        detected, strict = detect_batch(a, b, af, bf, params, scheme, engine=engine,
                                        symmetric=symmetric, **opts)
        parts.append((a, b, af, bf, detected, strict, kernel.batch_miss(a, b, af, bf, params.q)))
    return TrialBits(*(np.concatenate(col) for col in zip(*parts)))


def run_campaign(config: CampaignConfig, *, workers: int = 1,
                 engine: str = "auto") -> list[CampaignStats]:
    """One CampaignStats per grid cell, in grid order.

    Burst cells with eta < 2 come back as not-applicable rows.
    """
    tasks, owners, stats = [], [], []
    opts = config.mbrfd_opts()
    for cell, (scheme, w, eta, site, kind) in enumerate(config.cells()):
        spec = config.spec(eta, site, kind)
        if not spec.applicable:
            stats.append(CampaignStats(scheme, w, eta, site, kind, 0, 0, applicable=False))
            continue
        stats.append(CampaignStats(scheme, w, eta, site, kind, config.samples, 0))
        params = make_params(config.l, w, config.q)
        for chunk, size in _chunks(config.samples):
            tasks.append((params, scheme, spec, config.seed, chunk, size, opts, engine,
                          config.symmetric))
            owners.append(cell)

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_chunk, tasks))
    else:
        results = [_run_chunk(t) for t in tasks]

    for cell, (detected, strict, mismatches) in zip(owners, results):
        stats[cell].detected += detected
        stats[cell].strict_detected += strict
        stats[cell].oracle_mismatches += mismatches
    if config.strict:
        for st in stats:
            st.detected = st.strict_detected
    return stats
