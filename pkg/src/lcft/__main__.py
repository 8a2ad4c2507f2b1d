from lcft.cli import main

main()
