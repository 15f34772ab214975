"""Configurations around a vertex and their partition functions."""

from .structure import (
    CATALOGS,
    CatalogAudit,
    ConfigType,
    Configuration,
    ConfigurationError,
    canonical_form,
    canonicalize,
    catalog_defects,
    catalog_index,
    catalog_types,
    enumerate_configurations,
    enumerate_types,
    enumerate_views,
    find_configuration,
    g6_configuration,
    g6_label,
    structural_defects,
)
from .functions import (
    ConfigFunctions,
    PointValues,
    RawFunctions,
    alpha,
    config_functions,
    gamma,
    partition_functions,
    raw_functions,
)
from .extract import configuration_distribution, extract_configuration, graph_girth_class
