from corrcopies.cli import main

raise SystemExit(main())
