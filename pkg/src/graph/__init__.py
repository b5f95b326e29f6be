"""View graphs, their file formats and spanning-tree initialisation."""
