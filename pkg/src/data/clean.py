import pandas as pd
import numpy as np

from src.exceptions import DataValidationError
from src.models.design_core.design import DesignMatrix
from src.models.design_core.candidates import enumerate_subsets
from src.data.decoder import load_candidates


def _read_csv(path, **kwargs):
    try:
        return pd.read_csv(path, **kwargs)
    except FileNotFoundError:
        raise DataValidationError(f"File not found: {path}") from None
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataValidationError(f"Could not parse {path}: {e}") from e


def clean_design(df):
    """
    Validates a design table: numeric columns only, no missing or infinite values,
    no duplicated column names.
    """
    df_clean = df.copy()

    # 1. Column checks
    if df_clean.shape[1] == 0:
        raise DataValidationError("Design has no columns")
    duplicated = df_clean.columns[df_clean.columns.duplicated()].tolist()
    if duplicated:
        raise DataValidationError(f"Duplicated design columns: {duplicated}")

    # 2. Numeric conversion
    non_numeric = [c for c in df_clean.columns if not pd.api.types.is_numeric_dtype(df_clean[c])]
    if non_numeric:
        raise DataValidationError(f"Non-numeric design columns: {non_numeric}")
    df_clean = df_clean.astype(float)

    # 3. Missing / infinite values
    values = df_clean.to_numpy()
    if not np.all(np.isfinite(values)):
        bad_rows = np.flatnonzero(~np.isfinite(values).all(axis=1))
        raise DataValidationError(f"Design has missing or infinite values in rows {bad_rows[:10].tolist()}")

    return df_clean


def load_design(path):
    """Design CSV with a header row naming the regressors."""
    df = clean_design(_read_csv(path))
    return DesignMatrix(df.to_numpy(), tuple(str(c) for c in df.columns))


def load_response(path, n=None, binary=False):
    """Single-column response CSV (header optional)."""
    df = _read_csv(path, header=None)
    if df.shape[1] != 1:
        raise DataValidationError(f"Response file must have one column, found {df.shape[1]}")

    # A non-numeric first cell is a header
    column = pd.to_numeric(df.iloc[:, 0], errors='coerce')
    if np.isnan(column.iloc[0]) and not pd.isna(df.iloc[0, 0]):
        column = column.iloc[1:]
    y = column.to_numpy(dtype=float)

    if y.size == 0 or not np.all(np.isfinite(y)):
        raise DataValidationError(f"Response in {path} is empty or has missing/non-numeric values")
    if n is not None and y.size != n:
        raise DataValidationError(f"Response has {y.size} rows but the design has {n}")
    if binary and not np.all((y == 0.0) | (y == 1.0)):
        raise DataValidationError("Binary response must contain only 0 and 1")
    return y


def load_correlation(path):
    """Headerless square correlation (or covariance) matrix."""
    values = _read_csv(path, header=None).to_numpy(dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise DataValidationError(f"Correlation matrix must be square, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise DataValidationError("Correlation matrix has missing or infinite entries")
    return values


def load_problem(design_path, response_path, candidates_path=None, binary=False):
    """(design, response, candidate set) for the interval commands; candidates default to all subsets."""
    X = load_design(design_path)
    y = load_response(response_path, n=X.n, binary=binary)
    if candidates_path is None:
        candidates = enumerate_subsets(X.p, links=['logit'] if binary else None)
    else:
        candidates = load_candidates(candidates_path, p=X.p)
    return X, y, candidates
