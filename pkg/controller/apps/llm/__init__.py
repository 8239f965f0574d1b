"""
LLM Service: потоковый клиент chat completions с замером TTFT и Response Time
"""
