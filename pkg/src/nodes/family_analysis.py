"""Nodes for orthogonal-family analysis under diagonal and permuting unitaries."""

import itertools

import numpy as np
from pocketflow import BatchNode, Node

from domain.families import (
    diagonal_trace,
    diagonal_unitary,
    f_coefficient,
    permutation_unitary,
)
from domain.phases import gamma_mixed_family, phi
from domain.shared_store import get_shared_store, report, update_shared_store
from domain.states import DensityOperator, are_orthogonal, generate_family, make_density
from utils.random_instances import random_density, random_special_phases, random_unitary


def _sequence_label(sequence) -> str:
    return "-".join(str(j) for j in sequence)


class BuildFamilyNode(Node):
    """Generate the orthogonal family, check its pairwise orthogonality and draw the unitary."""

    def prep(self, shared):
        """Read family parameters and the scenario random stream."""
        store = get_shared_store(shared)
        return store.scenario.parameters, store.rng()

    def exec(self, prep_res):
        """Build rho1 and its family, verify orthogonality, draw the structured unitary."""
        params, rng = prep_res
        dim = params.dim
        if params.rho1 is not None:
            rho1 = DensityOperator.from_json(params.rho1)
        elif params.spectrum is not None:
            basis = random_unitary(dim, rng)
            rho1 = make_density((basis * np.asarray(params.spectrum)) @ basis.conj().T)
        else:
            rho1 = random_density(dim, rng, params.rank)
        family = generate_family(rho1)

        orthogonal = all(
            are_orthogonal(family[n], family[m], family.shift_power(m - n))
            for n, m in itertools.permutations(range(dim), 2)
        )

        if params.unitary == "permuting":
            sign = (-1) ** (dim - 1)
            unitary = permutation_unitary(random_special_phases(dim, rng, product=sign), family.basis)
        else:
            unitary = diagonal_unitary(random_special_phases(dim, rng), family.basis)
        return rho1, family, unitary, orthogonal

    def post(self, shared, prep_res, exec_res):
        """Store the family and unitary, then route on the unitary kind."""
        store = get_shared_store(shared)
        rho1, family, unitary, orthogonal = exec_res
        store.family = family
        store.unitary = unitary
        store.family_orthogonal = orthogonal
        store.summary = {
            "dim": family.dim,
            "rank": family.rank,
            "spectrum": [round(float(x), 12) for x in family.eigenvalues],
            "pure": rho1.is_pure,
            "unitary": unitary.kind,
            "special": unitary.special,
            "determinant": [round(unitary.determinant.real, 12), round(unitary.determinant.imag, 12)],
        }
        store.attachments = {
            "rho1": rho1.to_json(),
            "members": [member.to_json() for member in family.members],
        }
        update_shared_store(shared, store)
        report(store, f"✅ BuildFamilyNode completed: N={family.dim} family of rank {family.rank}, {unitary.kind} unitary")
        if not orthogonal:
            report(store, "⚠️ Family members are not pairwise orthogonal; rho1 has a degenerate nonzero eigenvalue")
        return unitary.kind


class PermutationSequencesNode(BatchNode):
    """Evaluate f and gamma^(N) for every ordering of the family under a permuting unitary."""

    def prep(self, shared):
        """One batch item per ordering of the N family indices."""
        store = get_shared_store(shared)
        family, unitary = store.family, store.unitary
        tol = store.scenario.parameters.tol
        return [(family, unitary.matrix, sequence, tol) for sequence in itertools.permutations(range(family.dim))]

    def exec(self, item):  # type: ignore
        """f and the phase of one ordering."""
        family, U_p, sequence, tol = item
        coefficient = f_coefficient(U_p, family, sequence)
        phase = phi(coefficient.raw_trace, tol)
        return {
            "sequence": _sequence_label(sequence),
            "f": coefficient.value,
            "trace_re": coefficient.raw_trace.real,
            "trace_im": coefficient.raw_trace.imag,
            "status": phase.status,
            "arg": phase.argument,
            "phase": phase.to_json(),
        }

    def post(self, shared, prep_res, exec_res_list):  # type: ignore
        """Collect rows and compare every determinate phase factor with the parity sign."""
        store = get_shared_store(shared)
        dim = store.family.dim
        tol = store.scenario.parameters.tol
        store.rows = exec_res_list

        expected = (-1) ** (dim - 1)
        signs = {
            int(np.rint(np.cos(row["arg"])))
            for row in exec_res_list
            if row["status"] == "determinate" and row["f"] > tol
        }
        if signs == {expected}:
            verdict = f"{expected:+d}"
        else:
            verdict = f"violated (signs {sorted(signs)})"
        store.summary.update(
            {
                "identity_f": exec_res_list[0]["f"],
                "parity_verdict": verdict,
                "sequences": len(exec_res_list),
            }
        )
        update_shared_store(shared, store)
        report(store, f"✅ PermutationSequencesNode completed: {len(exec_res_list)} sequences, parity {verdict}")
        return "default"


class DiagonalSequencesNode(BatchNode):
    """Evaluate every index subset under a diagonal unitary, closed form against matrix trace."""

    def prep(self, shared):
        """One batch item per index subset, shortest first."""
        store = get_shared_store(shared)
        family, unitary = store.family, store.unitary
        tol = store.scenario.parameters.tol
        return [
            (family, unitary.matrix, sequence, tol)
            for l in range(1, family.dim + 1)
            for sequence in itertools.combinations(range(family.dim), l)
        ]

    def exec(self, item):  # type: ignore
        """General trace and closed form of one subset."""
        family, U_d, sequence, tol = item
        result = gamma_mixed_family(U_d, family, sequence, tol)
        closed = diagonal_trace(U_d, family, sequence)
        return {
            "sequence": _sequence_label(sequence),
            "length": len(sequence),
            "trace_re": result.raw_trace.real,
            "trace_im": result.raw_trace.imag,
            "closed_re": closed.real,
            "closed_im": closed.imag,
            "status": result.status,
            "arg": result.argument,
            "phase": result.to_json(),
        }

    def post(self, shared, prep_res, exec_res_list):  # type: ignore
        """Collect rows, the largest trace above the rank and the closed-form error."""
        store = get_shared_store(shared)
        rank = store.family.rank
        store.rows = exec_res_list
        above_rank = [abs(complex(r["trace_re"], r["trace_im"])) for r in exec_res_list if r["length"] > rank]
        closed_errors = [
            abs(complex(r["trace_re"] - r["closed_re"], r["trace_im"] - r["closed_im"])) for r in exec_res_list
        ]
        store.summary.update(
            {
                "max_trace_above_rank": max(above_rank, default=0.0),
                "max_closed_form_error": max(closed_errors, default=0.0),
                "sequences": len(exec_res_list),
            }
        )
        update_shared_store(shared, store)
        report(store, f"✅ DiagonalSequencesNode completed: {len(exec_res_list)} sequences up to length {store.family.dim}")
        return "default"
