from pocketflow import Flow

from nodes.output import EmitResultsNode
from nodes.qubit_scan import QubitScanNode


def create_qubit_scan_flow():
    """
    Create and return the qubit trace scan flow.

    Flow Structure:
    QubitScanNode >> EmitResultsNode
    """
    scan = QubitScanNode()
    emit = EmitResultsNode()

    scan >> emit

    return Flow(start=scan)
