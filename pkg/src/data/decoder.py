import json

from src.exceptions import ConfigError
from src.models.design_core.design import CandidateModel, CandidateSet
from src.models.design_core.candidates import enumerate_subsets


def decode_model(entry, link=None):
    """A model from [1, 3], {"indices": [1, 3], "link": "logit"} or an existing CandidateModel."""
    if isinstance(entry, CandidateModel):
        return entry
    if isinstance(entry, dict):
        if 'indices' not in entry:
            raise ConfigError(f"Model entry {entry} has no 'indices'")
        return CandidateModel(tuple(entry['indices']), entry.get('link', link))
    if isinstance(entry, (list, tuple)):
        return CandidateModel(tuple(entry), link)
    raise ConfigError(f"Cannot read a model from {entry!r}")


def decode_candidates(data, p=None):
    """
    Candidate set from its JSON form:
      {"models": [[1], [1, 2], {"indices": [2], "link": "probit"}]}, a bare list of models, or
      {"enumerate": {"min_size": 1, "max_size": 3, "forced": [1], "links": ["logit"]}}.
    `p` bounds the indices and is the default enumeration width.
    """
    # 1. Enumerated families
    if isinstance(data, dict) and 'enumerate' in data:
        spec = dict(data['enumerate'])
        width = spec.pop('p', p)
        if width is None:
            raise ConfigError("Enumerated candidate sets need 'p' or a design")
        unknown = set(spec) - {'min_size', 'max_size', 'forced', 'links'}
        if unknown:
            raise ConfigError(f"Unknown enumeration keys: {sorted(unknown)}")
        candidates = enumerate_subsets(int(width), **spec)

    # 2. Explicit model lists
    else:
        entries = data.get('models') if isinstance(data, dict) else data
        if not isinstance(entries, list):
            raise ConfigError("Candidate JSON must be a list of models, {'models': [...]} or {'enumerate': {...}}")
        link = data.get('link') if isinstance(data, dict) else None
        candidates = CandidateSet(tuple(decode_model(e, link) for e in entries))

    if p is not None:
        candidates.check_bounds(p)
    return candidates


def load_candidates(path, p=None):
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Could not read candidate file {path}: {e}") from e
    return decode_candidates(data, p)


def parse_selected(text):
    """Selected model from "1,3", "1,3|logit" or the JSON forms accepted by decode_model."""
    text = text.strip()
    if text.startswith(('[', '{"')):
        try:
            return decode_model(json.loads(text))
        except json.JSONDecodeError as e:
            raise ConfigError(f"Could not parse selected model '{text}': {e}") from e

    indices_text, _, link = text.partition('|')
    try:
        indices = tuple(int(tok) for tok in indices_text.strip('{} ').split(',') if tok.strip())
    except ValueError:
        raise ConfigError(f"Selected model '{text}' must be comma-separated integers") from None
    return CandidateModel(indices, link.strip() or None)
