"""
Shipped certificate corpus.

The corpus directory holds one .cert file per case plus index.json, which maps each
certificate id to the case it formalizes and the one-line contradiction it reaches,
and lists the citation tags reports may use.
"""

import asyncio
import json
import logging
import os
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, TypeVar

from src.certs.checker import Verdict, check_certificate
from src.certs.parser import parse_file
from src.config.settings import settings
from src.utils.error_handler import BurniatError, ErrorCode, ParseError

logger = logging.getLogger(__name__)

INDEX_FILE = "index.json"
CERT_SUFFIX = ".cert"

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class CorpusEntry:
    cert_id: str
    path: str
    case: str = ""
    contradiction: str = ""


class Corpus:
    """Certificate files and index of one corpus directory"""

    def __init__(self, directory: Optional[str] = None):
        self.directory = settings.corpus_dir(directory)
        self._index: Optional[Dict] = None

    @property
    def index(self) -> Dict:
        if self._index is None:
            self._index = load_index(self.directory)
        return self._index

    @property
    def citations(self) -> Dict[str, str]:
        return self.index.get("citations", {})

    def citation(self, tag: str) -> str:
        """Citation text for a tag; unknown tags are an error so reports stay traceable"""
        if tag not in self.citations:
            raise BurniatError(ErrorCode.IO_MALFORMED_INDEX, f"citation tag '{tag}' is not in the corpus index")
        return self.citations[tag]

    def entries(self) -> List[CorpusEntry]:
        """Every certificate file in the directory, sorted by id"""
        if not os.path.isdir(self.directory):
            raise BurniatError(ErrorCode.IO_NOT_FOUND, f"corpus directory not found: {self.directory}")
        described = self.index.get("certificates", {})
        entries = []
        for name in sorted(os.listdir(self.directory)):
            if not name.endswith(CERT_SUFFIX):
                continue
            cert_id = name[: -len(CERT_SUFFIX)]
            info = described.get(cert_id)
            if info is None:
                logger.warning(f"Certificate {cert_id} has no entry in {INDEX_FILE}")
                info = {}
            entries.append(CorpusEntry(cert_id, os.path.join(self.directory, name),
                                       info.get("case", ""), info.get("contradiction", "")))
        missing = set(described) - {e.cert_id for e in entries}
        if missing:
            logger.warning(f"Index lists certificates with no file: {sorted(missing)}")
        return entries

    def paths(self) -> List[str]:
        return [e.path for e in self.entries()]


def load_index(directory: str) -> Dict:
    """
    Read index.json of a corpus directory

    Args:
        directory: Corpus directory

    Returns:
        Parsed index with "citations" and "certificates" maps

    Raises:
        BurniatError: index missing or malformed
    """
    path = os.path.join(directory, INDEX_FILE)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError as exc:
        raise BurniatError(ErrorCode.IO_NOT_FOUND, f"corpus index not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise BurniatError(ErrorCode.IO_MALFORMED_INDEX, f"{path}: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("certificates", {}), dict):
        raise BurniatError(ErrorCode.IO_MALFORMED_INDEX, f"{path}: expected an object with 'certificates'")
    return data


def _cert_id_of(path: str) -> str:
    name = os.path.basename(path)
    return name[: -len(CERT_SUFFIX)] if name.endswith(CERT_SUFFIX) else name


def check_path(path: str, n: Optional[int] = None, catalog_path: Optional[str] = None) -> Verdict:
    """Parse and check one certificate file; parse and I/O failures become INVALID verdicts"""
    try:
        certificate = parse_file(path)
    except FileNotFoundError:
        return Verdict(_cert_id_of(path), False, reason=f"file not found: {path}",
                       code=ErrorCode.IO_NOT_FOUND, source=path)
    except ParseError as exc:
        return Verdict(_cert_id_of(path), False, reason=exc.message, code=exc.code, source=path)
    return check_certificate(certificate, n, catalog_path)


async def _gather_in_threads(func: Callable[[T], R], items: Sequence[T], workers: int) -> List[R]:
    semaphore = asyncio.Semaphore(workers)

    async def run(item: T) -> R:
        async with semaphore:
            return await asyncio.to_thread(func, item)

    return await asyncio.gather(*[run(item) for item in items])


def run_concurrently(func: Callable[[T], R], items: Sequence[T], workers: Optional[int] = None) -> List[R]:
    """Apply func to every item on a bounded thread pool, preserving input order"""
    workers = workers or settings.CHECK_WORKERS
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    return asyncio.run(_gather_in_threads(func, items, workers))


def check_paths(paths: Sequence[str], n: Optional[int] = None, workers: Optional[int] = None,
                catalog_path: Optional[str] = None) -> List[Verdict]:
    """
    Check certificate files concurrently

    Args:
        paths: Certificate files
        n: Optional concrete parameter value for every certificate
        workers: Concurrent checks, defaults to settings.CHECK_WORKERS
        catalog_path: Optional catalog file override

    Returns:
        Verdicts sorted by certificate id
    """
    verdicts = run_concurrently(lambda p: check_path(p, n, catalog_path), list(paths), workers)
    verdicts.sort(key=lambda v: v.cert_id)
    invalid = [v.cert_id for v in verdicts if not v.valid]
    logger.info(f"Checked {len(verdicts)} certificates, {len(invalid)} invalid")
    if invalid:
        logger.warning(f"Invalid certificates: {invalid}")
    return verdicts


def check_corpus(directory: Optional[str] = None, n: Optional[int] = None,
                 workers: Optional[int] = None) -> List[Verdict]:
    return check_paths(Corpus(directory).paths(), n, workers)


def instantiation_sweep(path: str, upto: int = 25) -> List[Verdict]:
    """
    Re-check a certificate at every integer n of its domain up to a bound

    Certificates without a parameter are checked once.
    """
    certificate = parse_file(path)
    if certificate.domain_lo is None:
        return [check_certificate(certificate)]
    return [check_certificate(certificate, value) for value in range(certificate.domain_lo, upto + 1)]
