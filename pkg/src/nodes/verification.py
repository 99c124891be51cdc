"""Node running the verification suite."""

from pocketflow import BatchNode

from domain.checks import run_check, selected_checks
from domain.shared_store import get_shared_store, report, update_shared_store


class VerificationNode(BatchNode):
    """Run each selected check on its own seeded stream."""

    def prep(self, shared):
        """One batch item per selected check."""
        store = get_shared_store(shared)
        params = store.scenario.parameters
        return [(name, params, store.scenario.seed) for name in selected_checks(params)]

    def exec(self, item):  # type: ignore
        """Run a single check."""
        name, params, seed = item
        return run_check(name, params, seed)

    def post(self, shared, prep_res, exec_res_list):  # type: ignore
        """Store results, set the pass flag and report each check."""
        store = get_shared_store(shared)
        store.checks = exec_res_list
        store.passed = all(check.passed for check in exec_res_list)
        store.rows = [check.model_dump() for check in exec_res_list]
        update_shared_store(shared, store)
        for check in exec_res_list:
            mark = "✅" if check.passed else "❌"
            report(store, f"{mark} {check.name}: {check.cases} cases, max error {check.max_error:.3e}")
        failed = sum(not check.passed for check in exec_res_list)
        report(store, f"✅ VerificationNode completed: {len(exec_res_list) - failed}/{len(exec_res_list)} checks passed")
        return "default"
