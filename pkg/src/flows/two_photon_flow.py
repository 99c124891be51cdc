from pocketflow import Flow

from nodes.output import EmitResultsNode
from nodes.two_photon import FringeGridNode, TransportCertificateNode


def create_two_photon_flow():
    """
    Create and return the two-photon interferometer flow.

    Flow Structure:
    TransportCertificateNode >> FringeGridNode >> EmitResultsNode
    """
    certificate = TransportCertificateNode()
    fringes = FringeGridNode()
    emit = EmitResultsNode()

    certificate >> fringes >> emit

    return Flow(start=certificate)
