"""SemCom Edge Auction - learned revenue-optimal auctions for edge computing units."""

__version__ = "1.0.0"
