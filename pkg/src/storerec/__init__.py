"""Position-aware in-store recommendation engine and session service."""

__version__ = "0.1.0"

from storerec.catalog import Item, Shelf, ShelfZone, StoreLayout, validate_layout
from storerec.ratings import RatingMatrix
from storerec.similarity import (
    SimilarityModel,
    build_item_model,
    build_user_model,
    cosine_similarity,
    minkowski_distance,
)
from storerec.recommend import (
    AprioriRuleSet,
    Recommendation,
    StrContext,
    apriori_mine,
    apriori_recommend,
    icf_recommend,
    icf_str_recommend,
    ucf_recommend,
)

__all__ = [
    "Item",
    "Shelf",
    "ShelfZone",
    "StoreLayout",
    "validate_layout",
    "RatingMatrix",
    "SimilarityModel",
    "build_item_model",
    "build_user_model",
    "cosine_similarity",
    "minkowski_distance",
    "Recommendation",
    "AprioriRuleSet",
    "StrContext",
    "apriori_mine",
    "apriori_recommend",
    "icf_recommend",
    "ucf_recommend",
    "icf_str_recommend",
]
