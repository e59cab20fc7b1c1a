import pytest
from hypothesis import given, settings, strategies as st

from core.errors import NotAUrl
from core.url_canon import (
    canonicalize_url, host_registrable_domain, is_tracking_param, registrable_domain, try_canonicalize,
)


@pytest.mark.parametrize("raw, expected", [
    ("HTTP://Example.COM:80/a/b/?utm_source=x&id=3#frag", "http://example.com/a/b?id=3"),
    ("https://example.com:443/", "https://example.com/"),
    ("https://example.com", "https://example.com/"),
    ("https://example.com:8443/x", "https://example.com:8443/x"),
    ("https://example.com/p?fbclid=abc&gclid=1&q=%2f", "https://example.com/p?q=%2F"),
    ("https://example.com/p?UTM_Medium=a&keep=1", "https://example.com/p?keep=1"),
])
def test_canonical_forms(raw, expected):
    assert canonicalize_url(raw) == expected


@pytest.mark.parametrize("raw", ["ftp://example.com/x", "example.com/page", "not a url", "", "http://"])
def test_rejects_non_http(raw):
    with pytest.raises(NotAUrl):
        canonicalize_url(raw)


def test_try_canonicalize_applies_shortener_map():
    short = canonicalize_url("https://bit.ly/abc")
    assert try_canonicalize("https://bit.ly/abc", {short: "https://target.org/story/?utm_campaign=z"}) == \
        "https://target.org/story"
    assert try_canonicalize("mailto:someone@example.com") is None


@pytest.mark.parametrize("url, domain", [
    ("https://news.bbc.co.uk/story", "bbc.co.uk"),
    ("https://a.b.example.com/", "example.com"),
    ("https://foo.blogspot.co.uk/post", "foo.blogspot.co.uk"),
    ("http://192.168.0.1/admin", "192.168.0.1"),
    ("http://localhost/x", "localhost"),
])
def test_registrable_domain(url, domain):
    assert registrable_domain(canonicalize_url(url)) == domain


_hosts = st.sampled_from(["Example.com", "news.BBC.co.uk", "x.y.org", "site.net"])
_segments = st.lists(st.text(alphabet="abcXYZ019-_%", min_size=1, max_size=6), max_size=3)
_params = st.lists(
    st.tuples(st.sampled_from(["utm_source", "id", "q", "fbclid", "page", "s"]),
              st.text(alphabet="abc123", max_size=4)),
    max_size=4,
)


@settings(max_examples=200, deadline=None)
@given(scheme=st.sampled_from(["http", "HTTPS", "https"]), host=_hosts, segments=_segments,
       params=_params, slash=st.booleans())
def test_canonicalization_is_idempotent(scheme, host, segments, params, slash):
    path = "/" + "/".join(segments) + ("/" if slash else "")
    query = "&".join(f"{k}={v}" for k, v in params)
    raw = f"{scheme}://{host}{path}" + (f"?{query}" if query else "")
    once = canonicalize_url(raw)
    assert canonicalize_url(once) == once
    assert "utm_" not in once and "fbclid" not in once


@pytest.mark.parametrize("host, domain", [
    ("example.com", "example.com"),
    ("www.example.com", "example.com"),
    ("a.b.c.example.com", "example.com"),
    ("WWW.Example.COM", "example.com"),
    ("example.com.", "example.com"),
    ("example.org", "example.org"),
    ("cdn.example.net", "example.net"),
    ("blog.example.info", "example.info"),
    ("api.example.io", "example.io"),
    ("www.example.de", "example.de"),
    ("static.example.fr", "example.fr"),
    ("www.mit.edu", "mit.edu"),
    ("example.co.uk", "example.co.uk"),
    ("www.example.co.uk", "example.co.uk"),
    ("news.bbc.co.uk", "bbc.co.uk"),
    ("shop.example.org.uk", "example.org.uk"),
    ("www.ox.ac.uk", "ox.ac.uk"),
    ("example.com.au", "example.com.au"),
    ("www.abc.net.au", "abc.net.au"),
    ("example.co.nz", "example.co.nz"),
    ("m.example.co.za", "example.co.za"),
    ("www.example.co.jp", "example.co.jp"),
    ("example.ne.jp", "example.ne.jp"),
    ("example.or.jp", "example.or.jp"),
    ("www.example.com.br", "example.com.br"),
    ("portal.example.gov.br", "example.gov.br"),
    ("www.example.com.cn", "example.com.cn"),
    ("example.com.mx", "example.com.mx"),
    ("example.com.tr", "example.com.tr"),
    ("www.example.co.in", "example.co.in"),
    ("example.co.kr", "example.co.kr"),
    ("foo.blogspot.com", "foo.blogspot.com"),
    ("user.github.io", "user.github.io"),
    ("co.uk", "co.uk"),
    ("com", "com"),
    ("localhost", "localhost"),
    ("intranet", "intranet"),
    ("printer.local", "printer.local"),
    ("10.0.0.1", "10.0.0.1"),
    ("127.0.0.1", "127.0.0.1"),
    ("192.168.1.20", "192.168.1.20"),
    ("::1", "::1"),
    ("2001:db8::1", "2001:db8::1"),
])
def test_host_registrable_domain(host, domain):
    assert host_registrable_domain(host) == domain


@pytest.mark.parametrize("url, domain", [
    ("https://user:pw@www.example.co.uk:8443/x?y=1", "example.co.uk"),
    ("http://[2001:db8::1]:8080/p", "2001:db8::1"),
    ("https://sub.example.com.au/", "example.com.au"),
    ("not-a-url", ""),
])
def test_registrable_domain_of_raw_urls(url, domain):
    assert registrable_domain(url) == domain


@pytest.mark.parametrize("param, dropped", [
    ("utm_source=feed", True),
    ("UTM_Medium=x", True),
    ("utm_", True),
    ("%75tm_campaign=z", True),
    ("fbclid=abc", True),
    ("gclid=1", True),
    ("igshid=q", True),
    ("s=20", True),
    ("ref_src=twsrc", True),
    ("id=3", False),
    ("q=utm_source", False),
    ("ss=1", False),
    ("ref=home", False),
    ("sort=asc", False),
    ("", False),
])
def test_is_tracking_param(param, dropped):
    assert is_tracking_param(param) is dropped
