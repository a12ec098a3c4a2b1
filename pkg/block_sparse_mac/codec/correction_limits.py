class CORRECTION_LIMITS:
    NEVER_CERTIFIES = -1
    UNLIMITED = 2**31 - 1
