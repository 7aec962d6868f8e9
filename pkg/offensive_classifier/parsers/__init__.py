"""readers and writers for corpora, resources and prediction files."""
