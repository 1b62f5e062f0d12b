"""mgl: Sylow subgroup structure of Macdonald groups.

The Macdonald group G(alpha, beta) is the deficiency-zero group

    < A, B | A^[A,B] = A^alpha, B^[B,A] = B^beta >

which is finite and nilpotent whenever alpha and beta differ from 1.  This
package predicts the order, nilpotency class, and generator orders of every
Sylow p-subgroup from a closed-form 19-case classification, and verifies the
predictions independently by enumerating the finitely presented group
(Todd-Coxeter), passing to the regular permutation representation, and
measuring the lower central series.
"""

__version__ = "0.1.0"

from .errors import DomainError, InternalError, PrecisionError, ResourceError

__all__ = ["DomainError", "InternalError", "PrecisionError", "ResourceError"]
