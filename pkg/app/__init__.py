# autalg package
