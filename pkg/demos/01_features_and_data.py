"""Walk through URL parsing, the 23-feature vector, and synthetic data.

Run:  python3 demos/01_features_and_data.py
"""

import numpy as np

from phishguard.features import (
    CANONICAL_FEATURES,
    LEXICAL_FEATURES,
    extract_features,
    parse_url,
    to_canonical_vector,
)
from phishguard.generate import (
    GenerationConfig,
    generate_feature_rich_domains,
    generate_synthetic_urls,
)

# --- 1. decompose a suspicious URL --------------------------------------
url = "http://secure-paypal.com.login.bit.ly//next@192.168.1.1/verify"
parts = parse_url(url)
print(f"URL:   {url}")
print(f"host:  {parts.host}   path: {parts.path}")

# --- 2. the canonical feature vector ------------------------------------
features = extract_features(url)
print("\nLexical features (computable from the string alone):")
for name in LEXICAL_FEATURES:
    print(f"  {name:>28} = {features[name]}")
vector = to_canonical_vector(features)
print(f"\ncanonical vector shape {vector.shape}: first entry is "
      f"{CANONICAL_FEATURES[0]}, last is {CANONICAL_FEATURES[-1]}")
print("content/reputation features default to 0 (unknown) offline.")

# --- 3. synthetic phishing URLs from legitimate bases -------------------
cfg = GenerationConfig(
    legit_urls=["https://example.com/login", "https://mybank.com/account"],
    target_count=10,
    seed=7,
)
print("\nten synthetic phishing URLs:")
for u in generate_synthetic_urls(cfg):
    print(f"  {u}")

# --- 4. feature-rich domains with a verified trigger report -------------
domains, counts = generate_feature_rich_domains(cfg)
print(f"\n{len(domains)} feature-rich domains; trigger counts per feature:")
for name, count in sorted(counts.items()):
    print(f"  {name:>28}: {count}")
