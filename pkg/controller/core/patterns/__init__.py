# Design patterns shared by the apps
