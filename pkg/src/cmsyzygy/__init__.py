"""Cohen-Macaulay (syzygy) categories of Jacobian algebras of quivers with potential."""

__version__ = "0.1.0"

from .algebra import AlgebraBasis, build_algebra, is_schurian, m_matrix
from .catalog import CmpCatalog, enumerate_cmp, radical_generation_closure, stable_summary
from .dimer import analyze, cm_minimal, cozigzag_path, reduction_criterion, weights, zigzag_path
from .errors import CmsyzError, DomainError, EngineError
from .modules import (Morphism, Representation, decompose, ext1, ext2, hom_space, is_cm, is_indecomposable,
                      is_isomorphic, is_projective, loewy_label, middle_term, projective, projective_cover,
                      radical, simple, syzygy)
from .quiver import (Path, Potential, Quiver, Relation, RelationSet, chordless_cycles, infer_potential,
                     jacobian_relations, load, parse_quiver, validate_dimer_tree)
from .reduction import (functor_F, ideal_J, is_in_J_perp, lift_to_J_perp, quotient_algebra, reduction_report,
                        verify_generation_witness)
from .skew import d_type, fibered_product, minimality_transfer_check, skew_quiver
