"""
Field Factory
Builds the configured coefficient field for a given domain
"""

import numpy as np
import structlog

from ..cone.construction import ConeField, ConeParams, decay_matched_params
from ..config.models import FieldSettings
from ..fields.base import CoefficientField
from ..fields.families import ConstantField, RadialPerturbationField
from ..models.enums import DomainTag, FieldFamily

logger = structlog.get_logger(__name__)


def build_field(settings: FieldSettings, domain_tag: DomainTag = DomainTag.WHOLE_SPACE) -> CoefficientField:
    """Instantiate the field family named in the settings

    Cone fields always live on the shifted half-plane; the other families
    take the requested domain. Declared bounds, when given, replace the
    family's own.
    """
    family = FieldFamily(settings.family)
    field: CoefficientField
    if family is FieldFamily.CONSTANT:
        matrix = None if settings.matrix is None else np.asarray(settings.matrix, dtype=float)
        field = ConstantField(matrix, n=settings.n, domain_tag=domain_tag)
    elif family is FieldFamily.RADIAL:
        field = RadialPerturbationField(
            n=settings.n,
            amplitude=settings.amplitude,
            modulation=settings.modulation,
            frequency=settings.frequency,
            domain_tag=domain_tag,
        )
    else:
        params = (
            ConeParams.from_l(settings.cone_l)
            if settings.cone_l is not None
            else decay_matched_params(settings.decay_fraction, n=settings.n)
        )
        field = ConeField(params)

    if settings.bounds is not None:
        logger.info("declared_bounds_applied", family=family.value, bounds=settings.bounds.model_dump())
        field.bounds = settings.bounds
    return field
