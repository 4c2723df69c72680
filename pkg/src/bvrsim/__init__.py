"""bvrsim: BVR engagement simulation and decision-support modeling.

Simulates 2-v-2 beyond-visual-range defensive counter-air scenarios with
FSM agents, scores every tick with the DCA index, samples scenario inputs
by Latin hypercube, and trains gradient-boosted trees to predict the mean
engagement index for what-if exploration.
"""

__version__ = "0.1.0"
