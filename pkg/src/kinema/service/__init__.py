"""Streaming service front ends: the live-session protocol core, a TCP
newline-delimited JSON server, and the FastAPI application (REST + WebSocket).
"""
