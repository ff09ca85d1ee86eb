"""External magnetic fields and initial particle distributions"""

from .magnetic import (MagneticModel, SCALAR_2D, VECTOR_3D, example1_model, uniform_model,
                       constant_model, vector_model, get_model, eval_field, skew_matrix,
                       rotate_velocity, lorentz_term, check_bounded)
from .sampling import (InitialDistribution, TwoBump, Diocotron, TwoGaussian, DISTRIBUTIONS,
                       get_distribution, distribution_integral, sample_ensemble)

__all__ = [
    'MagneticModel',
    'SCALAR_2D',
    'VECTOR_3D',
    'example1_model',
    'uniform_model',
    'constant_model',
    'vector_model',
    'get_model',
    'eval_field',
    'skew_matrix',
    'rotate_velocity',
    'lorentz_term',
    'check_bounded',
    'InitialDistribution',
    'TwoBump',
    'Diocotron',
    'TwoGaussian',
    'DISTRIBUTIONS',
    'get_distribution',
    'distribution_integral',
    'sample_ensemble',
]
