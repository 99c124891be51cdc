"""Helper functions for ScenarioStore management in PocketFlow, and summary formatting."""

import sys
from typing import Any, TextIO

from domain.config import ScenarioStore


def get_shared_store(shared_dict: dict[str, Any]) -> ScenarioStore:
    """
    Safely extract ScenarioStore from PocketFlow shared dictionary.

    Args:
        shared_dict: Raw shared dictionary from PocketFlow

    Returns:
        ScenarioStore: Validated ScenarioStore object

    Raises:
        ValueError: If shared_dict doesn't contain a ScenarioStore
    """
    store = shared_dict.get("store")
    if isinstance(store, ScenarioStore):
        return store
    try:
        return ScenarioStore.model_validate(store if store is not None else shared_dict)
    except Exception as e:
        raise ValueError(f"Invalid ScenarioStore data in shared dictionary: {str(e)}")


def update_shared_store(shared_dict: dict[str, Any], store: ScenarioStore) -> None:
    """Update the PocketFlow shared dictionary with ScenarioStore data."""
    shared_dict["store"] = store


def console(store: ScenarioStore) -> TextIO:
    """stdout, unless results themselves are written to stdout."""
    return sys.stderr if store.scenario.output.path is None else sys.stdout


def report(store: ScenarioStore, message: str) -> None:
    """Print a status line unless the run is quiet."""
    if not store.quiet:
        print(message, file=console(store))


def _header(title: str) -> list[str]:
    return ["=" * 60, title, "=" * 60]


def format_qubit_scan_output(store: ScenarioStore) -> str:
    summary = store.summary
    output = _header("QUBIT TRACE SCAN - COMPLETED")
    output.append(f"Grid points: {summary.get('points', 0)}")
    if "max_cross_check_error" in summary:
        output.append(f"Max closed-form vs matrix deviation: {summary['max_cross_check_error']:.3e}")
    output.append(f"Nodal points of gamma1(rho1): {summary.get('nodes_t1', 0)}")
    output.append(f"Nodal points of gamma1(rho2): {summary.get('nodes_t2', 0)}")
    output.append(f"Nodal points of gamma2(rho1, rho2): {summary.get('nodes_t12', 0)}")
    simultaneous = summary.get("simultaneous_nodes", 0)
    if simultaneous:
        output.append(f"\n⚠ {simultaneous} points where all three phases are indeterminate")
    else:
        output.append("\n✓ No point leaves all three phases indeterminate")
    output.append("=" * 60)
    return "\n".join(output)


def format_families_output(store: ScenarioStore) -> str:
    summary = store.summary
    output = _header(f"ORTHOGONAL FAMILY ANALYSIS ({summary.get('unitary', '?')}) - COMPLETED")
    output.append(f"Dimension: {summary.get('dim')}, rank: {summary.get('rank')}")
    output.append(f"Spectrum: {summary.get('spectrum')}")
    if store.family_orthogonal:
        output.append("✓ All member pairs orthogonal under the shift unitary")
    else:
        output.append("⚠ Some member pairs are not orthogonal (degenerate nonzero eigenvalue)")
    output.append(f"Sequences evaluated: {len(store.rows)}")
    if summary.get("unitary") == "permuting":
        output.append(f"f for the identity sequence: {summary.get('identity_f', float('nan')):.12g}")
        output.append(f"Parity verdict: {summary.get('parity_verdict')}")
    else:
        output.append(f"Max trace with l > rank: {summary.get('max_trace_above_rank', 0.0):.3e}")
        output.append(f"Max closed-form vs matrix deviation: {summary.get('max_closed_form_error', 0.0):.3e}")
    output.append("=" * 60)
    return "\n".join(output)


def format_two_photon_output(store: ScenarioStore) -> str:
    summary = store.summary
    output = _header("TWO-PHOTON INTERFEROMETER - COMPLETED")
    output.append(f"Grid points: {summary.get('points', 0)} ({summary.get('mode')} mode)")
    output.append(f"Max |extracted - direct trace|: {summary.get('max_oracle_error', 0.0):.3e}")
    output.append(f"Indeterminate points: {summary.get('indeterminate', 0)}")
    output.append(f"Max rotation-path transport defect: {summary.get('max_transport_defect', 0.0):.3e}")
    if summary.get("noise"):
        output.append(f"Shot noise: {summary['noise']} mean pairs per bin")
    output.append("=" * 60)
    return "\n".join(output)


def format_verify_output(store: ScenarioStore) -> str:
    output = _header("VERIFICATION REPORT")
    for check in store.checks:
        mark = "✓" if check.passed else "✗"
        output.append(
            f"{mark} {check.name:<20} cases={check.cases:<6} max_error={check.max_error:.3e} tol={check.tolerance:.1e}"
        )
        if not check.passed:
            output.append(f"    {check.detail}")
    failed = sum(not check.passed for check in store.checks)
    output.append("")
    output.append("✓ All checks passed" if not failed else f"✗ {failed} of {len(store.checks)} checks failed")
    output.append("=" * 60)
    return "\n".join(output)


def format_final_output(store: ScenarioStore) -> str:
    formatters = {
        "qubit-scan": format_qubit_scan_output,
        "families": format_families_output,
        "two-photon": format_two_photon_output,
        "verify": format_verify_output,
    }
    return formatters[store.kind](store)
