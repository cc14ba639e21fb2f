"""
Germ file persistence.

Germs are written as canonical JSON (name-sorted simples, atoms and product
triples, two-space indent, trailing newline) so that identical germs give
byte-identical files. Loading accepts JSON or YAML and always re-validates.
"""

import json
import logging
from pathlib import Path
from typing import TextIO, Union

import yaml
from pydantic import ValidationError

from .germ import Germ, validate
from ..models.germFile import GermFile
from ..utils import ParseError

logger = logging.getLogger(__name__)

YAML_SUFFIXES = (".yaml", ".yml")

Source = Union[str, Path, TextIO]


def dumps_germ(germ: Germ) -> str:
    payload = germ.to_germ_file().model_dump(mode="json")
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def save_germ(germ: Germ, sink: Source) -> None:
    text = dumps_germ(germ)
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text, encoding="utf-8")
        logger.info(f"Saved germ '{germ.name}' to {sink}")
    else:
        sink.write(text)


def _read(source: Source) -> tuple:
    if isinstance(source, (str, Path)):
        path = Path(source)
        return path.read_text(encoding="utf-8"), path.suffix.lower() in YAML_SUFFIXES, str(path)
    return source.read(), False, getattr(source, "name", "<stream>")


def read_germ_file(source: Source) -> GermFile:
    """Parse a germ file without validating the axioms."""
    text, is_yaml, label = _read(source)
    try:
        data = yaml.safe_load(text) if is_yaml else json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ParseError(f"Cannot parse germ file {label}: {e}", witness=[label]) from None

    try:
        return GermFile.model_validate(data)
    except ValidationError as e:
        locations = [".".join(str(part) for part in err["loc"]) for err in e.errors()]
        raise ParseError(
            f"Germ file {label} does not match the germ schema ({e.error_count()} error(s))",
            witness=locations,
        ) from None


def load_germ(source: Source) -> Germ:
    """Read and validate a germ; violations raise GermValidationError."""
    return validate(read_germ_file(source))
