# Core utilities and design patterns
