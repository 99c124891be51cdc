"""Nodes simulating the two-photon interferometer over an (r, beta, theta) grid."""

import itertools

import numpy as np
from pocketflow import BatchNode, Node

from domain.shared_store import get_shared_store, report, update_shared_store
from domain.transport import transport_defect, transport_path
from domain.twophoton import (
    PolarizationEnsemble,
    direct_phase,
    purify,
    recipe,
    rotation_generator,
    run_fringe,
)


class TransportCertificateNode(Node):
    """Integrate each rotation path with the transport module and record its defect."""

    def prep(self, shared):
        """Rotation directions, the largest rotation angle and the step count."""
        store = get_shared_store(shared)
        params = store.scenario.parameters
        return params.thetas, max(params.betas()), store.scenario.steps

    def exec(self, prep_res):
        """Largest transport defect over the rotation paths."""
        thetas, beta_max, steps = prep_res
        identity = np.eye(2, dtype=np.complex128)
        if beta_max <= 0:
            return 0.0
        return max(
            transport_defect(transport_path(lambda _s, t=theta: rotation_generator(t), identity, beta_max, steps), identity)
            for theta in thetas
        )

    def post(self, shared, prep_res, exec_res):
        """Record the defect in the summary."""
        store = get_shared_store(shared)
        store.summary["max_transport_defect"] = exec_res
        update_shared_store(shared, store)
        report(store, f"✅ TransportCertificateNode completed: max defect {exec_res:.3e} over {len(prep_res[0])} paths")
        return "default"


class FringeGridNode(BatchNode):
    """Run one fringe per (r, beta, theta, target), in grid order."""

    def prep(self, shared):
        """Enumerate grid points; each carries its index for a seeded noise stream."""
        store = get_shared_store(shared)
        params = store.scenario.parameters
        grid = itertools.product(params.rs, params.betas(), params.thetas, params.targets)
        return [(index, point, params, store.scenario.seed) for index, point in enumerate(grid)]

    def exec(self, item):  # type: ignore
        """Fringe, readout and direct-trace error for one grid point."""
        index, (r, beta, theta, target), params, seed = item
        ensemble = PolarizationEnsemble(r)
        noise = params.noise
        scan = run_fringe(
            purify(ensemble),
            recipe(target, beta, theta),
            samples=params.fringe_samples,
            tol=params.tol,
            mean_pairs=noise.mean_pairs if noise.enabled else None,
            rng=np.random.default_rng([seed, index]),
        )
        direct = direct_phase(target, ensemble, beta, theta, params.tol)
        base = {"r": r, "beta": beta, "theta": theta, "target": target}
        if params.mode == "fringe":
            rows = [{**base, "chi": chi, "intensity": value} for chi, value in zip(scan.chis, scan.intensities)]
        else:
            rows = [
                {
                    **base,
                    "inner_re": scan.coefficient.real,
                    "inner_im": scan.coefficient.imag,
                    "extracted_arg": scan.extracted_arg,
                    "status": scan.phase.status,
                    "phase": scan.phase.to_json(),
                }
            ]
        return rows, abs(scan.coefficient - direct.raw_trace), scan.extracted_arg is None

    def post(self, shared, prep_res, exec_res_list):  # type: ignore
        """Flatten rows and summarize the oracle error and nodal points."""
        store = get_shared_store(shared)
        params = store.scenario.parameters
        store.rows = [row for rows, _, _ in exec_res_list for row in rows]
        store.summary.update(
            {
                "points": len(exec_res_list),
                "mode": params.mode,
                "max_oracle_error": max(error for _, error, _ in exec_res_list),
                "indeterminate": sum(flat for _, _, flat in exec_res_list),
                "noise": params.noise.mean_pairs if params.noise.enabled else None,
            }
        )
        update_shared_store(shared, store)
        report(store, f"✅ FringeGridNode completed: {len(exec_res_list)} fringes, {len(store.rows)} rows")
        if not params.noise.enabled and store.summary["max_oracle_error"] > 1e-9:
            report(store, f"⚠️ Fringe extraction deviates from direct traces by {store.summary['max_oracle_error']:.3e}")
        return "default"
