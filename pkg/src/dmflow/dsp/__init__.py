"""Signal-processing building blocks: WFRFT, FDA steering, precoding, PSK and the channel."""
