"""core configuration, errors, logging and the trainable text classifier."""
