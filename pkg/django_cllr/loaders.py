"""
Readers for the input files of the analysis commands.

- ``.cllr``: an optional ``alphabet a,b`` header line followed by one term
- ``.eq``: ``alphabet``, ``var``, ``body`` and any number of ``candidate`` lines
- ``.actl``: an optional ``alphabet`` header followed by one formula

Blank lines and lines starting with ``#`` are ignored in ``.eq`` files; in the
other two formats comments are handled by the grammars.
"""

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from .equations import EquationProblem
from .exceptions import InputFormatError
from .syntax import TAU, collect_actions, parse_term

ACTION_PATTERN = re.compile(r"[a-z][a-z0-9_]*")
HEADER_PATTERN = re.compile(r"^\s*alphabet(?=\s|$)(.*)$")


@dataclass(frozen=True)
class LoadedTerm:
    term: object
    alphabet: Tuple[str, ...]


@dataclass(frozen=True)
class LoadedEquation:
    problem: EquationProblem
    candidates: Tuple[object, ...]


def parse_alphabet(spec):
    """
    Parse ``"a,b,c"`` into an ordered tuple of distinct visible actions.

    Raises:
        InputFormatError: A name is not an action, is tau, or is repeated.
    """
    actions = [item.strip() for item in spec.split(",") if item.strip()]
    for action in actions:
        if not ACTION_PATTERN.fullmatch(action) or action == TAU:
            raise InputFormatError(f"Invalid action name in alphabet: {action!r}")
    if len(set(actions)) != len(actions):
        raise InputFormatError(f"Alphabet lists an action twice: {spec!r}")
    return tuple(actions)


def read_source(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputFormatError(f"Cannot read {path}: {exc.strerror}")


def split_header(text):
    """
    Separate a leading ``alphabet`` line from the rest of the text.

    Returns:
        tuple: (alphabet tuple or None, remaining text)
    """
    lines = text.splitlines()
    for index, line in enumerate(lines):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        match = HEADER_PATTERN.match(line)
        if match:
            return parse_alphabet(match.group(1)), "\n".join(lines[:index] + lines[index + 1 :])
        break
    return None, text


def load_term(path, alphabet=None):
    """
    Load a term file. An explicit ``alphabet`` wins over the file header; with
    neither, the alphabet is the actions of the term in order of appearance.
    """
    header, body = split_header(read_source(path))
    declared = alphabet or header
    term = parse_term(body, declared)
    return LoadedTerm(term, tuple(declared) if declared else tuple(collect_actions(term)))


def load_formula_source(path):
    """Return (header alphabet or None, formula text) of an ``.actl`` file."""
    return split_header(read_source(path))


def load_equation(path, alphabet=None, bound=None):
    """
    Load an equation problem with its candidate solutions.

    Raises:
        InputFormatError: Unknown directives, or a missing ``var`` or ``body`` line.
    """
    header = None
    var = None
    body_text = None
    candidate_texts = []
    for number, line in enumerate(read_source(path).splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        keyword, _, rest = stripped.partition(" ")
        rest = rest.strip()
        if keyword == "alphabet":
            header = parse_alphabet(rest)
        elif keyword == "var":
            var = rest
        elif keyword == "body":
            body_text = rest
        elif keyword == "candidate":
            candidate_texts.append(rest)
        else:
            raise InputFormatError(f"{path}, line {number}: unknown directive {keyword!r}")
    if not var:
        raise InputFormatError(f"{path}: missing 'var' line")
    if body_text is None:
        raise InputFormatError(f"{path}: missing 'body' line")

    declared = alphabet or header
    body = parse_term(body_text, declared)
    candidates = tuple(parse_term(text, declared) for text in candidate_texts)
    if not declared:
        declared = []
        for term in (body,) + candidates:
            declared.extend(action for action in collect_actions(term) if action not in declared)
    problem = EquationProblem(var, body, tuple(declared), bound)
    return LoadedEquation(problem, candidates)


def resolve_alphabet(explicit: Optional[Tuple[str, ...]], *sources):
    """First explicit or declared alphabet; otherwise the union of the sources' actions in order."""
    if explicit:
        return tuple(explicit)
    merged = []
    for source in sources:
        for action in source or ():
            if action not in merged:
                merged.append(action)
    return tuple(merged)
