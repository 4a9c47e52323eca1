"""URL parsing and the 23-feature canonical vector.

Lexical features are computed from the URL string alone. Content and
reputation features (DNS, page content, traffic rank, ...) go through a
pluggable resolver; the offline default answers 0 ("unknown") for all of
them so that training on precomputed CSVs and live serving share one code
path.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from urllib.parse import urlsplit

import numpy as np

from .errors import MalformedUrl, MissingFeature, ResolverFailure

# Canonical feature order. Every model input in the toolkit is a length-23
# vector in exactly this order.
CANONICAL_FEATURES = (
    "Abnormal_URL",
    "DNSRecord",
    "Google_Index",
    "HTTPS_token",
    "Iframe",
    "Links_in_tags",
    "Links_pointing_to_page",
    "Prefix_Suffix",
    "Redirect",
    "Request_URL",
    "RightClick",
    "SFH",
    "Shortening_Service",
    "Statistical_report",
    "Submitting_to_email",
    "URL_Length",
    "URL_of_Anchor",
    "double_slash_redirecting",
    "having_At_Symbol",
    "having_IP_Address",
    "having_Sub_Domain",
    "on_mouseover",
    "web_traffic",
)

# Computable from the URL string alone.
LEXICAL_FEATURES = (
    "URL_Length",
    "having_IP_Address",
    "having_At_Symbol",
    "double_slash_redirecting",
    "Prefix_Suffix",
    "having_Sub_Domain",
    "Shortening_Service",
    "HTTPS_token",
)

# Need page content or external reputation; answered by a resolver.
RESOLVED_FEATURES = tuple(
    name for name in CANONICAL_FEATURES if name not in LEXICAL_FEATURES
)

TERNARY_VALUES = (-1, 0, 1)

_SCHEME_RE = re.compile(r"^[a-zA-Z][a-zA-Z0-9+.-]*$")
_DOTTED_QUAD_RE = re.compile(r"^(\d{1,3})\.(\d{1,3})\.(\d{1,3})\.(\d{1,3})$")
_HEX_QUAD_RE = re.compile(r"^(0x[0-9a-f]{1,2}\.){3}0x[0-9a-f]{1,2}$", re.IGNORECASE)
_HEX_HOST_RE = re.compile(r"^0x[0-9a-f]{1,8}$", re.IGNORECASE)


@dataclass(frozen=True)
class UrlParts:
    """A decomposed URL; `raw` keeps the original input for string checks."""

    scheme: str
    host: str
    port: int | None
    path: str
    query: str
    fragment: str
    raw: str


@dataclass(frozen=True)
class ResolverAnswer:
    feature: str
    value: int
    source: str  # offline_default | precomputed | external


def parse_url(raw: str) -> UrlParts:
    """Decompose a raw URL, defaulting the scheme to http when absent.

    Userinfo before '@' is stripped from the host but stays visible in
    `raw` for the having_At_Symbol check.
    """
    if not raw:
        raise MalformedUrl("empty input")
    work = raw.strip()
    if "://" in work:
        scheme, rest = work.split("://", 1)
        if not _SCHEME_RE.match(scheme):
            raise MalformedUrl(f"invalid scheme in {raw!r}")
        work = scheme.lower() + "://" + rest
    else:
        work = "http://" + work
    parts = urlsplit(work)
    host = (parts.hostname or "").lower()
    if not host:
        raise MalformedUrl(f"no host in {raw!r}")
    try:
        port = parts.port
    except ValueError as exc:
        raise MalformedUrl(f"invalid port in {raw!r}") from exc
    return UrlParts(
        scheme=parts.scheme,
        host=host,
        port=port,
        path=parts.path,
        query=parts.query,
        fragment=parts.fragment,
        raw=raw,
    )


def _data_path(name: str) -> Path:
    override = os.environ.get("PHISHGUARD_DATA_DIR")
    if override:
        candidate = Path(override) / name
        if candidate.exists():
            return candidate
    return Path(__file__).parent / "data" / name


def _load_lines(path: Path) -> tuple[str, ...]:
    entries = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(line.lower())
    return tuple(entries)


@lru_cache(maxsize=None)
def shortener_hosts() -> frozenset[str]:
    return frozenset(_load_lines(_data_path("shorteners.txt")))


@lru_cache(maxsize=None)
def public_suffixes() -> frozenset[str]:
    return frozenset(_load_lines(_data_path("suffixes.txt")))


def is_ip_host(host: str) -> bool:
    """Dotted-quad or hex IPv4 notations count as IP hosts."""
    m = _DOTTED_QUAD_RE.match(host)
    if m:
        return all(int(g) <= 255 for g in m.groups())
    return bool(_HEX_QUAD_RE.match(host) or _HEX_HOST_RE.match(host))


def split_host(host: str) -> tuple[list[str], str]:
    """Split a host into (subdomain labels, registrable domain).

    The registrable domain is one label plus the longest matching public
    suffix from the bundled list. IP hosts have no registrable domain.
    """
    if is_ip_host(host):
        return [], ""
    labels = host.split(".")
    suffixes = public_suffixes()
    # longest suffix match, in labels
    for n in range(len(labels) - 1, 0, -1):
        candidate = ".".join(labels[-n:])
        if candidate in suffixes:
            if len(labels) > n:
                registrable = ".".join(labels[-(n + 1):])
                return labels[: -(n + 1)], registrable
            return [], candidate
    # unknown TLD: treat the last label as the suffix
    if len(labels) >= 2:
        return labels[:-2], ".".join(labels[-2:])
    return [], host


def extract_lexical(parts: UrlParts) -> dict[str, int]:
    """Fill the 8 features computable from the URL string alone."""
    raw = parts.raw
    subdomains, registrable = split_host(parts.host)
    sub_labels = list(subdomains)
    if sub_labels and sub_labels[0] == "www":
        sub_labels = sub_labels[1:]
    d = len(sub_labels)
    if d <= 1:
        sub_domain = -1
    elif d == 2:
        sub_domain = 0
    else:
        sub_domain = 1
    return {
        "URL_Length": len(raw),
        "having_IP_Address": 1 if is_ip_host(parts.host) else -1,
        "having_At_Symbol": 1 if "@" in raw else -1,
        "double_slash_redirecting": 1 if raw.rfind("//") > 7 else -1,
        "Prefix_Suffix": 1 if "-" in parts.host else -1,
        "having_Sub_Domain": sub_domain,
        "Shortening_Service": 1 if parts.host in shortener_hosts() else -1,
        "HTTPS_token": 1 if "https" in parts.host else -1,
    }


class OfflineResolver:
    """Default resolver: every non-lexical feature is unknown (0).

    Stateless, safe to share across threads.
    """

    shareable = True
    source = "offline_default"

    def resolve(self, feature: str, parts: UrlParts) -> ResolverAnswer:
        return ResolverAnswer(feature, 0, self.source)


class PrecomputedResolver:
    """Serves feature values from a fixed mapping; unknowns fall back to 0."""

    shareable = True
    source = "precomputed"

    def __init__(self, values: dict[str, int]):
        self.values = dict(values)

    def resolve(self, feature: str, parts: UrlParts) -> ResolverAnswer:
        if feature in self.values:
            return ResolverAnswer(feature, self.values[feature], self.source)
        return ResolverAnswer(feature, 0, "offline_default")


def resolve_remaining(parts: UrlParts, resolver=None,
                      lexical: dict[str, int] | None = None) -> dict[str, int]:
    """Complete a feature vector with resolver answers for the 15
    non-lexical features. Returns the full 23-entry mapping."""
    resolver = resolver or OfflineResolver()
    values = dict(lexical) if lexical is not None else extract_lexical(parts)
    for name in RESOLVED_FEATURES:
        answer = resolver.resolve(name, parts)
        if answer.value not in TERNARY_VALUES:
            raise ResolverFailure(name, f"value {answer.value!r} outside {{-1,0,1}}")
        values[name] = answer.value
    return values


def extract_features(raw: str, resolver=None) -> dict[str, int]:
    """Parse a URL and produce the complete 23-feature mapping."""
    parts = parse_url(raw)
    return resolve_remaining(parts, resolver)


def to_canonical_vector(values: dict[str, float]) -> np.ndarray:
    """Emit values in the fixed canonical order as a float vector."""
    missing = [name for name in CANONICAL_FEATURES if name not in values]
    if missing:
        raise MissingFeature(missing)
    return np.array([float(values[name]) for name in CANONICAL_FEATURES])


def from_canonical_vector(vector) -> dict[str, float]:
    """Rebind a canonical vector to its feature names."""
    vector = np.asarray(vector)
    if vector.shape != (len(CANONICAL_FEATURES),):
        raise MissingFeature(CANONICAL_FEATURES)
    return {name: float(v) for name, v in zip(CANONICAL_FEATURES, vector)}
