"""
URL canonicalization and registrable-domain lookup.

Canonical form: lowercased scheme and host, default port removed, tracking
query parameters dropped (fixed drop-list from core.config), fragment removed,
trailing slash removed from non-root paths, percent-escapes in upper-case hex.
"""

import ipaddress
import re
from functools import lru_cache
from typing import Dict, Optional
from urllib.parse import unquote_plus, urlsplit, urlunsplit

import tldextract

from core.config import DEFAULT_PORTS, TRACKING_PARAMS, TRACKING_PREFIXES
from core.errors import NotAUrl

_PERCENT_RE = re.compile(r"%[0-9a-fA-F]{2}")


def _upper_percent(value: str) -> str:
    return _PERCENT_RE.sub(lambda m: m.group(0).upper(), value)


def is_tracking_param(param: str) -> bool:
    """True when a raw `key=value` query component is on the drop-list."""
    key = unquote_plus(param.split("=", 1)[0]).lower()
    return key in TRACKING_PARAMS or key.startswith(TRACKING_PREFIXES)


def canonicalize_url(raw: str) -> str:
    """
    Canonicalize an absolute http(s) URL.

    Args:
        raw: URL as found in a post or platform link field

    Returns:
        Canonical URL string; canonicalize_url is idempotent

    Raises:
        NotAUrl: if raw is not an absolute http(s) URL
    """
    raw = (raw or "").strip()
    try:
        parts = urlsplit(raw)
        host = parts.hostname
        port = parts.port
    except ValueError as exc:
        raise NotAUrl(raw) from exc

    scheme = parts.scheme.lower()
    if scheme not in DEFAULT_PORTS or not host:
        raise NotAUrl(raw)

    netloc = f"[{host}]" if ":" in host else host
    if "@" in parts.netloc:
        netloc = parts.netloc.rpartition("@")[0] + "@" + netloc
    if port is not None and port != DEFAULT_PORTS[scheme]:
        netloc = f"{netloc}:{port}"

    path = _upper_percent(parts.path).rstrip("/") or "/"

    kept = [p for p in parts.query.split("&") if p and not is_tracking_param(p)]
    query = "&".join(_upper_percent(p) for p in kept)

    return urlunsplit((scheme, netloc, path, query, ""))


def try_canonicalize(raw: str, shortener_map: Optional[Dict[str, str]] = None) -> Optional[str]:
    """Canonicalize, resolving static shortener entries; None when raw is not a URL."""
    try:
        url = canonicalize_url(raw)
        if shortener_map and url in shortener_map:
            url = canonicalize_url(shortener_map[url])
        return url
    except NotAUrl:
        return None


@lru_cache(maxsize=1)
def _extractor() -> tldextract.TLDExtract:
    # Offline: bundled public-suffix snapshot only, private suffixes (blogspot.co.uk, ...) honoured.
    return tldextract.TLDExtract(
        cache_dir=None,
        suffix_list_urls=(),
        include_psl_private_domains=True,
    )


def _is_ip(host: str) -> bool:
    try:
        ipaddress.ip_address(host)
        return True
    except ValueError:
        return False


@lru_cache(maxsize=65536)
def host_registrable_domain(host: str) -> str:
    host = host.lower().rstrip(".")
    if _is_ip(host):
        return host
    ext = _extractor()(host)
    if not ext.suffix or not ext.domain:
        return host
    return f"{ext.domain}.{ext.suffix}"


def registrable_domain(url: str) -> str:
    """
    Registrable domain (public suffix plus one label) of a canonical URL.

    IP hosts are returned verbatim; hosts without a known suffix are returned whole.
    """
    host = urlsplit(url).hostname or ""
    return host_registrable_domain(host)
