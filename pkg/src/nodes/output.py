"""Node writing scenario results to CSV or JSON."""

from pocketflow import Node

from domain.shared_store import get_shared_store, report, update_shared_store
from utils.result_io import render, render_json, write_text


class EmitResultsNode(Node):
    """Render the result table (or verification report) and write it out."""

    def prep(self, shared):
        """Hand the store to exec."""
        return get_shared_store(shared)

    def exec(self, store):  # type: ignore
        """Render rows, summary and attachments in the requested format."""
        scenario = store.scenario
        fmt = scenario.output.format
        if scenario.kind == "verify" and fmt == "json":
            payload = {"passed": store.passed, "checks": store.rows}
            return render_json(payload, scenario.seed, scenario.kind)
        extra = {"summary": store.summary} if store.summary else {}
        extra.update(store.attachments)
        return render(store.rows, fmt, scenario.seed, scenario.kind, extra)

    def post(self, shared, prep_res, exec_res):
        """Write the rendered text and mark the run completed."""
        store = get_shared_store(shared)
        store.destination = write_text(exec_res, store.scenario.output.path)
        store.completed = True
        update_shared_store(shared, store)
        report(store, f"✅ EmitResultsNode completed: wrote {len(store.rows)} rows to {store.destination}")
        return "default"
