"""
ADCodes - self-complementary nonadditive codes for the amplitude damping channel
"""
