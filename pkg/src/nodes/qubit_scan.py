"""Node for the closed-form qubit trace scan."""

from pocketflow import Node

from domain.families import cross_check_qubit_point, qubit_pair, qubit_scan
from domain.shared_store import get_shared_store, report, update_shared_store


class QubitScanNode(Node):
    """Evaluate t1, t2, t12 over the (eta, alpha, lambda1) grid and flag nodal points."""

    def prep(self, shared):
        """Read the scan grid from the scenario."""
        store = get_shared_store(shared)
        return store.scenario.parameters

    def exec(self, params):
        """Closed-form traces per grid point, nodal counts and the matrix cross-check."""
        points = qubit_scan(params.etas, params.alphas, params.lambda1s)
        pairs = {lam: qubit_pair(lam) for lam in params.lambda1s} if params.cross_check else {}

        rows = []
        summary = {"points": len(points), "nodes_t1": 0, "nodes_t2": 0, "nodes_t12": 0, "simultaneous_nodes": 0}
        max_error = 0.0
        for point in points:
            phases = point.phases(params.tol)
            row = {"eta": point.eta, "alpha": point.alpha, "lambda1": point.lambda1}
            for name, trace in zip(("t1", "t2", "t12"), point.traces):
                row[f"{name}_re"] = trace.real
                row[f"{name}_im"] = trace.imag
            for name, phase in zip(("t1", "t2", "t12"), phases):
                row[f"status_{name}"] = phase.status
                row.setdefault("phases", {})[name] = phase.to_json()
                if not phase.is_determinate:
                    summary[f"nodes_{name}"] += 1
            if point.all_indeterminate(params.tol):
                summary["simultaneous_nodes"] += 1
            if params.cross_check:
                max_error = max(max_error, cross_check_qubit_point(point, pairs[point.lambda1]))
            rows.append(row)

        if params.cross_check:
            summary["max_cross_check_error"] = max_error
        return rows, summary

    def post(self, shared, prep_res, exec_res):
        """Store rows and summary, warn when the closed form drifts from the matrices."""
        store = get_shared_store(shared)
        store.rows, store.summary = exec_res
        update_shared_store(shared, store)
        report(
            store,
            f"✅ QubitScanNode completed: {store.summary['points']} grid points, "
            f"{store.summary['simultaneous_nodes']} simultaneous nodes",
        )
        if store.summary.get("max_cross_check_error", 0.0) > 1e-11:
            report(store, f"⚠️ Closed form deviates from matrix traces by {store.summary['max_cross_check_error']:.3e}")
        return "default"
