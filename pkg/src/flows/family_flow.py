from pocketflow import Flow

from nodes.family_analysis import (
    BuildFamilyNode,
    DiagonalSequencesNode,
    PermutationSequencesNode,
)
from nodes.output import EmitResultsNode


def create_families_flow():
    """
    Create and return the orthogonal-family analysis flow.

    Flow Structure:
    BuildFamilyNode - "permuting" >> PermutationSequencesNode >> EmitResultsNode
    BuildFamilyNode - "diagonal"  >> DiagonalSequencesNode    >> EmitResultsNode

    The build node draws the family and the structured unitary, then routes
    on the unitary's kind.
    """
    build = BuildFamilyNode()
    permuting = PermutationSequencesNode()
    diagonal = DiagonalSequencesNode()
    emit = EmitResultsNode()

    build - "permuting" >> permuting
    build - "diagonal" >> diagonal
    permuting >> emit
    diagonal >> emit

    return Flow(start=build)
