# Tests for oaParkingMonitor