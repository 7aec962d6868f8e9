"""text normalization, blacklist lexicon and character language models."""
