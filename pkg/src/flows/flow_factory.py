from flows.family_flow import create_families_flow
from flows.qubit_scan_flow import create_qubit_scan_flow
from flows.two_photon_flow import create_two_photon_flow
from flows.verify_flow import create_verify_flow


# Factory function for easy access
def get_flow(flow_type: str = "verify"):
    """
    Factory function to get different flow types.

    Args:
        flow_type: Type of flow to create:
            - 'qubit-scan': Closed-form qubit traces over the (eta, alpha, lambda1) grid
            - 'families': Orthogonal family under a diagonal or permuting unitary
            - 'two-photon': Simulated interferometer fringes and phase extraction
            - 'verify': Full verification suite

    Returns:
        Configured flow instance
    """
    if flow_type == "qubit-scan":
        return create_qubit_scan_flow()
    elif flow_type == "families":
        return create_families_flow()
    elif flow_type == "two-photon":
        return create_two_photon_flow()
    elif flow_type == "verify":
        return create_verify_flow()
    else:
        available_types = ["qubit-scan", "families", "two-photon", "verify"]
        raise ValueError(
            f"Unknown flow type: {flow_type}. Available types: {', '.join(available_types)}"
        )
