"""Canonical machine-readable serialization: key-sorted JSON, repr floats.

Every emitter sorts its collections, so identical inputs give byte-identical
files (the determinism contract of the CLI).
"""

from __future__ import annotations

import json

from .encoding import DigitizationConfig
from .hamiltonian import BosonRegistry, PolyHamiltonian


def dumps(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def hamiltonian_to_dict(h: PolyHamiltonian) -> dict:
    return {
        "schema": "orbiqsim.hamiltonian.v1",
        "theory": h.theory,
        "n_bosons": h.n_bosons,
        "boson_labels": list(h.bosons.labels),
        "kinetic_prefactor": h.kinetic_prefactor,
        "constant": h.constant,
        "monomials": [
            {"factors": [[b, p] for b, p in key], "coeff": coeff}
            for key, coeff in h.monomials()
        ],
    }


def hamiltonian_from_dict(data: dict) -> PolyHamiltonian:
    if data.get("schema") != "orbiqsim.hamiltonian.v1":
        raise ValueError("not a serialized Hamiltonian")
    h = PolyHamiltonian(
        BosonRegistry(tuple(data["boson_labels"])),
        constant=float(data["constant"]),
        kinetic_prefactor=float(data["kinetic_prefactor"]),
        theory=data.get("theory", "custom"),
    )
    for mono in data["monomials"]:
        factors = []
        for b, p in mono["factors"]:
            factors.extend([b] * p)
        h.add_term(factors, float(mono["coeff"]))
    return h


def config_to_dict(cfg: DigitizationConfig) -> dict:
    return {
        "qubits_per_boson": cfg.qubits_per_boson,
        "half_width": cfg.half_width,
        "boundary": cfg.boundary,
        "momentum_convention": cfg.momentum_convention,
        "kinetic_realization": cfg.kinetic_realization,
    }


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
