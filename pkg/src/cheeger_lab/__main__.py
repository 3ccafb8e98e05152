from cheeger_lab.cli import main

raise SystemExit(main())
