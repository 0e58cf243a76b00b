"""Bit-exact JSON round-trips"""

from itertools import combinations
from typing import List

import numpy as np

from ..geometry.acs import kernel_structure, random_triple, standard_structure
from ..geometry.bbf import PRESETS, load_preset
from ..geometry.twistor import standard_model
from ..models.form import Form
from ..models.fourier import FourierScalar
from ..models.report import Check
from ..models.structure import FourierStructureField
from ..utils.serialization import (
    decode_form,
    decode_ring,
    decode_structure,
    encode_form,
    encode_ring,
    encode_structure,
)
from .base import Campaign, Job


def random_form(dim: int, degree: int, terms: int, rng: np.random.Generator) -> Form:
    """Random trigonometric-polynomial form"""
    indices = list(combinations(range(dim), degree))
    coeffs = {}
    for position in rng.choice(len(indices), size=min(terms, len(indices)), replace=False):
        scalar_terms = {}
        for _ in range(3):
            freq = tuple(int(k) for k in rng.integers(-2, 3, dim))
            scalar_terms[(freq, (0,) * dim)] = complex(rng.standard_normal(), rng.standard_normal())
        coeffs[indices[position]] = FourierScalar(dim, scalar_terms)
    return Form(dim, degree, coeffs)


def _check(name: str, exact: bool, **params) -> Check:
    return Check(name, 0.0 if exact else 1.0, exact, params=params)


class RoundtripCampaign(Campaign):
    """Encode, decode and compare forms, structure fields and lattice presets"""

    command = "roundtrip"

    def _forms(self) -> List[Check]:
        m = standard_model(self.config.n)
        checks = []
        for name, form in (("omega", m.omega), ("eta", m.eta)):
            text = encode_form(form)
            decoded = decode_form(text)
            checks.append(_check("form_roundtrip", decoded == form and encode_form(decoded) == text, form=name))
        for index in range(self.config.trials):
            rng = np.random.default_rng([self.config.seed, index])
            form = random_form(4, int(rng.integers(1, 4)), 4, rng)
            text = encode_form(form)
            if decode_form(text) != form or encode_form(decode_form(text)) != text:
                checks.append(_check("form_roundtrip", False, form="random", index=index))
                break
        else:
            checks.append(_check("form_roundtrip", True, form="random", trials=self.config.trials))
        return checks

    def _structures(self) -> List[Check]:
        dim = 4 * self.config.n
        triple = random_triple(self.config.n, self.config.seed)
        fields = {
            "standard": standard_structure(dim),
            "kernel": kernel_structure(standard_model(self.config.n).omega, self.config.seed),
            "random_triple_J": FourierStructureField.constant(triple.J),
        }
        checks = []
        for name, field in fields.items():
            text = encode_structure(field)
            decoded = decode_structure(text)
            point = np.zeros(dim)
            deviation = float(np.max(np.abs(decoded.matrix_at(point) - field.matrix_at(point))))
            exact = encode_structure(decoded) == text and deviation <= self.tol.pruning
            checks.append(Check("structure_roundtrip", deviation, exact, params={"structure": name}))
        return checks

    def _lattices(self) -> List[Check]:
        checks = []
        for name in PRESETS:
            ring = load_preset(name)
            decoded = decode_ring(encode_ring(ring))
            exact = (
                np.array_equal(decoded.space.gram, ring.space.gram)
                and (decoded.n, decoded.C, decoded.name) == (ring.n, ring.C, ring.name)
            )
            checks.append(_check("lattice_roundtrip", exact, lattice=name))
        return checks

    def jobs(self) -> List[Job]:
        return [
            Job("form_roundtrip", self._forms),
            Job("structure_roundtrip", self._structures),
            Job("lattice_roundtrip", self._lattices),
        ]
