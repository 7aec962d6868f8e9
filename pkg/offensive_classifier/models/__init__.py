"""probabilistic classifiers, model artifacts and soft-voting ensembles."""
