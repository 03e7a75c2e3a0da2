from coalition_forge.cli import main

main()
