"""
Command-line interface for SE(3) motion averaging.

Subcommands:
- average: estimate global motions from a g2o or JSON view graph
- synth: generate contaminated synthetic scenes with ground truth
- sweep: kernel width sensitivity on one scene
- compare: MCC against plain averaging over many seeds
- eval: rotation and translation error against ground truth
"""

__version__ = "0.1.0"
__app_name__ = "MCC Motion Averaging"
