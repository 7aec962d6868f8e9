"""packaged seed resources (variant dictionary, leet map, lexicon, clean words)."""
