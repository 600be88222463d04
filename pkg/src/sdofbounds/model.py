"""Channel-level data model of the RIS-assisted two-user MIMO wiretap IC.

Naming follows the link convention ``H_ji``: transmitter ``i`` to receiver
``j``.  ``D_i`` is the Tx ``i`` -> RIS channel, ``G_j`` the RIS -> Rx ``j``
channel and ``Ge`` the RIS -> eavesdropper channel.  A cascaded link is
``H + G @ diag(phi) @ D``.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, NegativeRisBudget, NonPositiveAntennaCount

__all__ = [
    "AntennaConfig",
    "validate_config",
    "ChannelSet",
    "CascadedChannels",
    "LINKS",
    "synthesize_channels",
    "cascade",
    "complex_to_pairs",
    "pairs_to_complex",
    "channels_to_dict",
    "channels_from_dict",
    "save_channels",
    "load_channels",
]


@dataclass(frozen=True)
class AntennaConfig:
    """Antenna counts ``(M1, M2, N1, N2, Ne)`` and RIS element count ``R``.

    ``Ne = 0`` encodes the absence of an eavesdropper.
    """

    M1: int
    M2: int
    N1: int
    N2: int
    Ne: int
    R: int = 0

    def __post_init__(self):
        validate_config(self)

    @property
    def antennas(self):
        return (self.M1, self.M2, self.N1, self.N2, self.Ne)

    def leakage_budget(self):
        """RIS elements needed to null every leakage link, ``(M1+M2)*Ne``."""
        return (self.M1 + self.M2) * self.Ne

    def full_budget(self):
        """RIS elements needed to null every leakage and interference link."""
        return self.leakage_budget() + self.M1 * self.N2 + self.M2 * self.N1

    def with_ris(self, R):
        return replace(self, R=R)

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def __str__(self):
        return "({},{},{},{},{}; R={})".format(*self.antennas, self.R)


def validate_config(cfg):
    """Check the invariants of an :class:`AntennaConfig`.

    Raises
    ------
    NonPositiveAntennaCount
        If any of ``M1, M2, N1, N2`` is below one or ``Ne`` is negative.
    NegativeRisBudget
        If ``R`` is negative.
    """
    for name in ("M1", "M2", "N1", "N2", "Ne", "R"):
        value = getattr(cfg, name)
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise TypeError(f"{name} must be an integer, got {value!r}")
    for name in ("M1", "M2", "N1", "N2"):
        if getattr(cfg, name) < 1:
            raise NonPositiveAntennaCount(name, getattr(cfg, name), "must be >= 1")
    if cfg.Ne < 0:
        raise NonPositiveAntennaCount("Ne", cfg.Ne, "must be >= 0")
    if cfg.R < 0:
        raise NegativeRisBudget("R", cfg.R, "must be >= 0")
    return True


# link name -> (direct, RIS->receiver, Tx->RIS)
LINKS = {
    "11": ("H11", "G1", "D1"),
    "12": ("H12", "G1", "D2"),
    "21": ("H21", "G2", "D1"),
    "22": ("H22", "G2", "D2"),
    "e1": ("He1", "Ge", "D1"),
    "e2": ("He2", "Ge", "D2"),
}

_MATRICES = ("H11", "H12", "H21", "H22", "He1", "He2", "D1", "D2", "G1", "G2", "Ge")


def _shapes(cfg):
    M1, M2, N1, N2, Ne = cfg.antennas
    R = cfg.R
    return {
        "H11": (N1, M1),
        "H12": (N1, M2),
        "H21": (N2, M1),
        "H22": (N2, M2),
        "He1": (Ne, M1),
        "He2": (Ne, M2),
        "D1": (R, M1),
        "D2": (R, M2),
        "G1": (N1, R),
        "G2": (N2, R),
        "Ge": (Ne, R),
    }


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """All direct and RIS-segment channel matrices for one configuration."""

    config: AntennaConfig
    H11: np.ndarray
    H12: np.ndarray
    H21: np.ndarray
    H22: np.ndarray
    He1: np.ndarray
    He2: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    G1: np.ndarray
    G2: np.ndarray
    Ge: np.ndarray

    def __post_init__(self):
        for name, shape in _shapes(self.config).items():
            arr = np.array(getattr(self, name), dtype=np.complex128)
            if arr.shape != shape:
                raise DimensionMismatch(f"{name} has shape {arr.shape}, expected {shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def link(self, name):
        """Return ``(H, G, D)`` for link ``name`` (one of :data:`LINKS`)."""
        return tuple(getattr(self, m) for m in LINKS[name])

    def matrices(self):
        return {name: getattr(self, name) for name in _MATRICES}

    def equals(self, other):
        return self.config == other.config and all(
            np.array_equal(a, b) for a, b in zip(self.matrices().values(), other.matrices().values())
        )


@dataclass(frozen=True, eq=False)
class CascadedChannels:
    Hbar11: np.ndarray
    Hbar12: np.ndarray
    Hbar21: np.ndarray
    Hbar22: np.ndarray
    Hbar_e1: np.ndarray
    Hbar_e2: np.ndarray

    def link(self, name):
        return getattr(self, "Hbar_" + name if name.startswith("e") else "Hbar" + name)


def _substream(seed, label):
    ss = np.random.SeedSequence([int(seed), zlib.crc32(label.encode("ascii"))])
    return np.random.default_rng(ss)


def synthesize_channels(cfg, seed):
    """Draw i.i.d. unit-variance circularly-symmetric complex Gaussian channels.

    Every matrix comes from its own substream keyed by ``(seed, label)``, so
    the result is a pure function of ``(cfg, seed)``.
    """
    validate_config(cfg)
    if seed < 0:
        raise ValueError("seed must be non-negative")
    mats = {}
    for name, shape in _shapes(cfg).items():
        rng = _substream(seed, name)
        re_im = rng.standard_normal(shape + (2,))
        mats[name] = (re_im[..., 0] + 1j * re_im[..., 1]) / np.sqrt(2.0)
    return ChannelSet(cfg, **mats)


def _cascade_link(H, G, D, phi):
    return H + (G * phi) @ D


def cascade(ch, phi):
    """Form the six cascaded channels ``H + G diag(phi) D``."""
    phi = np.asarray(phi, dtype=np.complex128)
    if phi.shape != (ch.config.R,):
        raise DimensionMismatch(f"phi has shape {phi.shape}, expected ({ch.config.R},)")
    out = {}
    for name in LINKS:
        key = "Hbar_" + name if name.startswith("e") else "Hbar" + name
        out[key] = _cascade_link(*ch.link(name), phi)
    return CascadedChannels(**out)


# -- JSON --------------------------------------------------------------------

def complex_to_pairs(a):
    """Row-major list of ``[re, im]`` pairs."""
    a = np.asarray(a, dtype=np.complex128)
    return [[float(z.real), float(z.imag)] for z in a.reshape(-1)]


def pairs_to_complex(pairs, shape):
    arr = np.asarray(pairs, dtype=np.float64).reshape(-1, 2) if len(pairs) else np.zeros((0, 2))
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(shape)


def matrix_to_json(a):
    a = np.asarray(a)
    return {"shape": list(a.shape), "data": complex_to_pairs(a)}


def matrix_from_json(obj):
    return pairs_to_complex(obj["data"], tuple(obj["shape"]))


def channels_to_dict(ch):
    return {
        "config": ch.config.to_dict(),
        "matrices": {name: matrix_to_json(m) for name, m in ch.matrices().items()},
    }


def channels_from_dict(obj):
    cfg = AntennaConfig(**obj["config"])
    mats = {name: matrix_from_json(m) for name, m in obj["matrices"].items()}
    return ChannelSet(cfg, **mats)


def save_channels(ch, path):
    Path(path).write_text(json.dumps(channels_to_dict(ch)))


def load_channels(path):
    return channels_from_dict(json.loads(Path(path).read_text()))
