"""Ship-type code to name lookup and coarse class buckets for display."""

SHIP_TYPES = {
    0: "Not available",
    20: "Wing in ground",
    21: "Wing in ground, hazardous A",
    22: "Wing in ground, hazardous B",
    23: "Wing in ground, hazardous C",
    24: "Wing in ground, hazardous D",
    30: "Fishing",
    31: "Towing",
    32: "Towing, long or wide",
    33: "Dredging or underwater ops",
    34: "Diving ops",
    35: "Military ops",
    36: "Sailing",
    37: "Pleasure craft",
    40: "High speed craft",
    41: "High speed craft, hazardous A",
    42: "High speed craft, hazardous B",
    43: "High speed craft, hazardous C",
    44: "High speed craft, hazardous D",
    49: "High speed craft, no additional info",
    50: "Pilot vessel",
    51: "Search and rescue vessel",
    52: "Tug",
    53: "Port tender",
    54: "Anti-pollution equipment",
    55: "Law enforcement",
    58: "Medical transport",
    59: "Noncombatant ship",
    60: "Passenger",
    61: "Passenger, hazardous A",
    62: "Passenger, hazardous B",
    63: "Passenger, hazardous C",
    64: "Passenger, hazardous D",
    69: "Passenger, no additional info",
    70: "Cargo",
    71: "Cargo, hazardous A",
    72: "Cargo, hazardous B",
    73: "Cargo, hazardous C",
    74: "Cargo, hazardous D",
    79: "Cargo, no additional info",
    80: "Tanker",
    81: "Tanker, hazardous A",
    82: "Tanker, hazardous B",
    83: "Tanker, hazardous C",
    84: "Tanker, hazardous D",
    89: "Tanker, no additional info",
    90: "Other type",
    99: "Other type, no additional info",
}

# coarse display classes used by the track API and the viewer legend
COARSE_CLASSES = ("cargo", "tanker", "fishing", "passenger", "other")


def type_name(code: int | None) -> str:
    if code is None:
        return "Unknown"
    if code in SHIP_TYPES:
        return SHIP_TYPES[code]
    decade = (code // 10) * 10
    return SHIP_TYPES.get(decade, "Other type")


def coarse_class(code: int | None) -> str:
    """Bucket a ship-type code into one of the coarse display classes."""
    if code is None:
        return "other"
    if 70 <= code <= 79:
        return "cargo"
    if 80 <= code <= 89:
        return "tanker"
    if code == 30:
        return "fishing"
    if 60 <= code <= 69:
        return "passenger"
    return "other"
