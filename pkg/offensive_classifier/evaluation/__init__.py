"""metrics, inter-annotator agreement and ablation runs."""
