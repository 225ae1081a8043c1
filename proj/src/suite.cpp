namespace escalier {}
