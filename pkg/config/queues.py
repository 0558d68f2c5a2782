"""Task queue names."""

# Grid-search runs and the workflow that fans them out
TRAINING_QUEUE = "training-queue"

# Test queue name
TEST_QUEUE = "test-queue"
