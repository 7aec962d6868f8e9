"""feature extraction: graphemic statistics, tf-idf, word embeddings and assembly."""
