"""Extremal-length geometry, Thurston measures and the pluriharmonic Poisson
integral on the Teichmueller space of the once-punctured torus."""
from .foliation import (DomainError, MappingClass, MeasuredFoliation, ProjectiveClass,
                        intersection, mcg_apply, mcg_apply_point, mcg_apply_slope)
from .teich import (I, NEG_INFINITY, SurfaceType, TorusPoint, extremal_length, green,
                    hubbard_masur, kerckhoff_sup, teich_distance, teich_ray)

__version__ = "0.1.0"
