from pocketflow import Flow

from nodes.output import EmitResultsNode
from nodes.verification import VerificationNode


def create_verify_flow():
    """
    Create and return the verification flow.

    Flow Structure:
    VerificationNode >> EmitResultsNode
    """
    verification = VerificationNode()
    emit = EmitResultsNode()

    verification >> emit

    return Flow(start=verification)
