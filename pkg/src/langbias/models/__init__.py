from ._common import IndexOutOfVocabularyError, NegativeFeatureError, SingleClassError
from ._kernels import BACKEND
from .nb import NbModel, nb_fit, nb_log_scores, nb_predict, nb_predict_matrix
from .svm import (SvmModel, TrainOptions, primal_objective, svm_decision, svm_decision_matrix,
                  svm_fit, svm_predict, svm_predict_matrix)

__all__ = [
    "BACKEND", "IndexOutOfVocabularyError", "NegativeFeatureError", "SingleClassError",
    "NbModel", "nb_fit", "nb_log_scores", "nb_predict", "nb_predict_matrix",
    "SvmModel", "TrainOptions", "primal_objective", "svm_decision", "svm_decision_matrix",
    "svm_fit", "svm_predict", "svm_predict_matrix",
]
