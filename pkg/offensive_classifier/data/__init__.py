"""documents, label hierarchy, splitting, sampling and corpus statistics."""
